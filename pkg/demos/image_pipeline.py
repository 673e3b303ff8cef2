"""Jersey crop to OCR input, step by step."""

import numpy as np

from playlog import (
    PixelImage,
    binary_threshold,
    gaussian_blur,
    invert,
    pad_to_square,
    scale,
    to_grayscale,
)


def show(tag, image):
    print(f"{tag}: {image.width}x{image.height}x{image.channels}")
    if image.channels == 1:
        print(image.pixels[:, :, 0])


# a dark digit stroke on a bright jersey patch
rng = np.random.default_rng(3)
patch = np.full((6, 8, 3), 210, dtype=np.uint8)
patch[1:5, 3:5] = (40, 40, 40)
patch += rng.integers(0, 12, size=patch.shape).astype(np.uint8)
crop = PixelImage.from_array(patch)
show("crop", crop)

gray = to_grayscale(crop)
show("gray", gray)

# OCR engines want dark-on-light normalized squares
binary = invert(binary_threshold(gray, 128))
show("inverted binary", binary)

square = pad_to_square(binary)
show("padded", square)

doubled = scale(square, 2.0)
show("scaled x2", doubled)

blurred = gaussian_blur(gray, 1.0)
show("blurred", blurred)
