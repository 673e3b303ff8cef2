"""
Box geometry and unique matching
================================
"""

from playlog import BoundingBox, SizeBucket, hungarian_assign, iou, match_detections, size_bucket

a = BoundingBox(0, 0, 10, 10)
b = BoundingBox(5, 0, 10, 10)

print("iou(a, a) =", iou(a, a))
print("iou(a, b) =", iou(a, b))  # half-shifted twin: 1/3

# the evaluation buckets: tiny boxes are excluded, 32x32 is already small
for side in (31, 32, 96, 97):
    box = BoundingBox(0, 0, side, side)
    print(f"{side}x{side} ->", size_bucket(box).value)

# unique prediction-to-truth pairing as an assignment problem
cost = [
    [0.1, 0.9, 0.8],
    [0.7, 0.2, 0.9],
]
assignment = hungarian_assign(cost)
print("pairs:", assignment.pairs, "total cost:", assignment.total_cost)

# the greedy per-frame matcher used by the evaluator works on scores
preds = [(BoundingBox(0, 0, 50, 50), 0.9), (BoundingBox(48, 0, 50, 50), 0.8)]
gts = [BoundingBox(2, 0, 50, 50), BoundingBox(52, 0, 50, 50)]
print("matched gt per prediction:", match_detections(preds, gts, 0.5))
