from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class Sample:
    """Sorted, strictly positive observations.

    ``values`` is stored as a read-only float array; duplicates are kept.
    """

    values: np.ndarray
    source: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size == 0:
            raise ValidationError("sample is empty")
        if not np.all(np.isfinite(v)):
            raise ValidationError("sample contains non-finite values")
        if np.any(v <= 0):
            raise ValidationError("sample values must be strictly positive")
        v = np.sort(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n

    def scaled(self, c: float) -> "Sample":
        return Sample(self.values * c, source=f"{self.source}*{c:g}")


def parse_column(lines, source: str = "") -> Sample:
    """Parse one value per line into a :class:`Sample`.

    Blank lines and ``#`` comments are skipped.  The first remaining line may
    be a non-numeric header; any later non-numeric line is an error that
    names its (1-based) line number.
    """
    values, seen_data, header = [], False, None
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            v = float(text)
        except ValueError:
            if not seen_data and header is None:
                header = text
                continue
            raise ValidationError(f"{source or 'input'}, line {lineno}: not a number: {text!r}") from None
        if not np.isfinite(v) or v <= 0:
            raise ValidationError(f"{source or 'input'}, line {lineno}: value {text} is not strictly positive and finite")
        seen_data = True
        values.append(v)
    if not values:
        raise ValidationError(f"{source or 'input'}: no data values found")
    return Sample(np.array(values), source=source, meta={"header": header} if header else {})
