import numpy as np
import pytest


def planted_dataset(n_genes=12, n_samples=6, gap=20.0, spread=0.5, seed=0):
    """Two well-separated gene groups plus a two-class sample labeling.

    Returns (values, planted gene labels, sample class tags). The first half
    of the genes sits near 0, the second near ``gap``; samples alternate
    between two classes with a mean shift so information gain is non-trivial.
    """
    rng = np.random.default_rng(seed)
    half = n_genes // 2
    values = np.empty((n_genes, n_samples))
    values[:half] = rng.normal(0.0, spread, size=(half, n_samples))
    values[half:] = rng.normal(gap, spread, size=(n_genes - half, n_samples))
    classes = ["A" if j % 2 == 0 else "B" for j in range(n_samples)]
    shift = np.array([1.0 if c == "A" else -1.0 for c in classes])
    values += 0.25 * shift
    planted = np.array([0] * half + [1] * (n_genes - half))
    return values, planted, classes


def write_dataset(directory, values, classes, stem="demo"):
    """Write matrix and label files in the package's delimited layout."""
    n, m = values.shape
    sample_ids = [f"s{j}" for j in range(m)]
    lines = ["\t".join(["gene_id", *sample_ids])]
    for i in range(n):
        lines.append("\t".join([f"g{i}", *(repr(float(v)) for v in values[i])]))
    matrix_path = directory / f"{stem}.tsv"
    matrix_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    labels_path = directory / f"{stem}-labels.tsv"
    labels_path.write_text(
        "\n".join(f"{s}\t{c}" for s, c in zip(sample_ids, classes)) + "\n",
        encoding="utf-8",
    )
    return matrix_path, labels_path


@pytest.fixture
def small_dataset(tmp_path):
    values, planted, classes = planted_dataset()
    matrix_path, labels_path = write_dataset(tmp_path, values, classes)
    return matrix_path, labels_path, planted
