# Digit detections to jersey numbers: gate, suppress overlaps, compose.

from playlog import AssemblyConfig, BoundingBox, DigitDetection, assemble_number, suppress_digits


def digit(value, conf, x):
    return DigitDetection(box=BoundingBox(x, 10, 10, 14), digit=value, confidence=conf)


# a clean two-digit read: "5" then "1" left to right
digits = [digit(5, 0.99, 0), digit(1, 0.98, 12)]
print("5 + 1 ->", assemble_number(suppress_digits(digits)))

# the same cell read twice: suppression keeps the more confident copy
doubled = [digit(5, 0.99, 0), digit(6, 0.97, 1), digit(1, 0.98, 12)]
survivors = suppress_digits(doubled)
print("survivors:", [(d.digit, d.confidence) for d in survivors])
print("doubled read ->", assemble_number(survivors))

# low-confidence digits never reach composition
noisy = [digit(7, 0.50, 0)]
print("gated read ->", assemble_number(suppress_digits(noisy)))

# a looser gate lets it through
loose = AssemblyConfig(confidence_threshold=0.5)
print("loose gate ->", assemble_number(suppress_digits(noisy, loose), loose))
