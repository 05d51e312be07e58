"""Shared store for the per-criterion acceptance lines."""

RESULTS: dict[int, tuple[bool, str]] = {}


def record(k: int, ok: bool, detail: str = "") -> bool:
    RESULTS[k] = (bool(ok), detail)
    print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    return bool(ok)
