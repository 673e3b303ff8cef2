"""Score a toy detector run and inspect the digit confusion matrix."""

from playlog import BoundingBox, confusion_matrix, evaluate_detections, focal_loss, ClassDistribution

# two frames: frame 0 is clean, frame 1 has a shifted box and a spurious one
preds = {
    0: [(BoundingBox(0, 0, 50, 50), 0.95), (BoundingBox(100, 0, 120, 120), 0.90)],
    1: [(BoundingBox(8, 0, 50, 50), 0.80), (BoundingBox(300, 300, 40, 40), 0.60)],
}
truth = {
    0: [BoundingBox(0, 0, 50, 50), BoundingBox(100, 0, 120, 120)],
    1: [BoundingBox(0, 0, 50, 50)],
}

report = evaluate_detections(preds, truth)
print(report.to_text())

# focal loss collapses as the true class gets easy
for p in (0.5, 0.9, 0.99):
    dist = ClassDistribution((p, 1.0 - p), true_index=0, gamma=2.0)
    print(f"p={p}: focal={focal_loss(dist):.8f}")

cm = confusion_matrix([(2, 2), (2, 2), (2, 2), (2, 2), (6, 8), (6, 6)])
print("row supports:", [int(v) for v in cm.counts.sum(axis=1)])
print("normalized[2][2] =", cm.normalized[2][2])
print("normalized[6][8] =", cm.normalized[6][8])
