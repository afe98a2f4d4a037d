"""Cross-validated macro-F1 of a depth-10 decision tree, computed with
scikit-learn on exactly the folds the Rust evaluator uses.

Usage: python3 scripts/oracle_cv.py   (from the repository root)

Generates each dataset with the CLI, exports the fold assignment with the
`export_folds` example, then prints the per-dataset mean macro-F1. Also
prints a quadratic-discriminant score as a near Bayes-optimal reference for
the blobs generator.
"""
import subprocess
import tempfile
from pathlib import Path

import numpy as np
from sklearn.discriminant_analysis import QuadraticDiscriminantAnalysis
from sklearn.metrics import f1_score
from sklearn.tree import DecisionTreeClassifier

ROOT = Path(__file__).resolve().parent.parent
DATASETS = {
    "blobs": ["--kind", "blobs", "--instances", "500", "--features", "5", "--classes", "3", "--noise", "1", "--seed", "42"],
    "spirals": ["--kind", "spirals", "--instances", "300", "--features", "2", "--classes", "3", "--noise", "0.05", "--seed", "7"],
}
K, SEED = 5, 42


def run(*args):
    return subprocess.run(args, cwd=ROOT, check=True, capture_output=True, text=True).stdout


def cv(model_factory, x, y, folds):
    scores = []
    for f in range(K):
        train, test = folds != f, folds == f
        pred = model_factory().fit(x[train], y[train]).predict(x[test])
        scores.append(f1_score(y[test], pred, average="macro", labels=np.unique(y[test])))
    return float(np.mean(scores))


def main():
    run("cargo", "build", "-q", "--release", "-p", "fibevo-cli")
    run("cargo", "build", "-q", "--release", "-p", "fibevo", "--examples")
    with tempfile.TemporaryDirectory() as tmp:
        for name, gen in DATASETS.items():
            csv = Path(tmp) / f"{name}.csv"
            run("target/release/fibevo", "gen-data", *gen, "--out", str(csv))
            folds = np.array([int(v) for v in run("target/release/examples/export_folds", str(csv), str(K), str(SEED)).split()])
            data = np.loadtxt(csv, delimiter=",", skiprows=1)
            x, y = data[:, :-1], data[:, -1].astype(int)
            tree = cv(lambda: DecisionTreeClassifier(max_depth=10, random_state=0), x, y, folds)
            qda = cv(QuadraticDiscriminantAnalysis, x, y, folds)
            print(f"{name}: tree={tree:.6f} qda={qda:.6f}")


if __name__ == "__main__":
    main()
