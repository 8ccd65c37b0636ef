import numpy as np


class SingularMatrixError(np.linalg.LinAlgError):
    pass


def solve_linear_system(A, b, rel_tol=1e-12):
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    Raises SingularMatrixError when a pivot falls below ``rel_tol`` times the
    largest absolute entry of ``A``.
    """
    A = np.array(A, dtype=np.float64)
    b = np.array(b, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    n = A.shape[0]
    if b.shape[0] != n:
        raise ValueError(f"b has length {b.shape[0]}, expected {n}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise ValueError("A and b must be finite")
    scale = np.max(np.abs(A)) if n else 0.0
    if scale == 0.0:
        raise SingularMatrixError("matrix is zero")

    M = np.hstack([A, b.reshape(n, -1)])
    for k in range(n):
        p = k + int(np.argmax(np.abs(M[k:, k])))
        if abs(M[p, k]) < rel_tol * scale:
            raise SingularMatrixError(f"matrix is singular to tolerance (pivot {abs(M[p, k]):.3g} at column {k})")
        if p != k:
            M[[k, p]] = M[[p, k]]
        M[k + 1:, k:] -= np.outer(M[k + 1:, k] / M[k, k], M[k, k:])

    x = M[:, n:].copy()
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - M[k, k + 1:n] @ x[k + 1:]) / M[k, k]
    return x.reshape(b.shape)
