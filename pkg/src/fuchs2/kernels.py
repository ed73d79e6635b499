"""Backend selection for the cubic-scan kernels.

Tries the compiled extension first and falls back to the pure-Python
implementation.  Callers pass multiplication/star tables as lists of rows;
flattening to the backend's layout happens here (it costs O(n^2) against the
O(n^3) scans).
"""

from array import array

from . import _pykernels

try:  # pragma: no cover - exercised only when the extension is built
    from . import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

BACKEND = "compiled" if _ckernels is not None else "pure-python"


def _flat(rows, n):
    out = array("i", bytes(4 * n * n))
    k = 0
    for row in rows:
        out[k:k + n] = array("i", row)
        k += n
    return out


def first_assoc_violation(mul_rows, backend=None):
    """First non-associative triple of a row-list table, or None."""
    n = len(mul_rows)
    impl = _pick(backend)
    if impl is _pykernels:
        flat = [v for row in mul_rows for v in row]
    else:
        flat = _flat(mul_rows, n)
    return impl.first_assoc_violation(flat, n)


def first_condition_violation(mul_rows, star_rows, a_start=0, a_stop=None,
                              backend=None):
    """Lex-least violation of the translation conditions, or None."""
    n = len(mul_rows)
    impl = _pick(backend)
    if impl is _pykernels:
        mul = [v for row in mul_rows for v in row]
        star = [v for row in star_rows for v in row]
    else:
        mul = _flat(mul_rows, n)
        star = _flat(star_rows, n)
    return impl.first_condition_violation(mul, star, n, a_start, a_stop)


def _pick(backend):
    if backend == "pure-python" or (backend is None and _ckernels is None):
        return _pykernels
    if backend in (None, "compiled") and _ckernels is not None:
        return _ckernels
    raise ValueError(f"unknown kernel backend {backend!r}")
