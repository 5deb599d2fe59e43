"""
Probability vectors on a finite alphabet
Distribution is strictly positive; EmpiricalType may carry zero counts
"""

from typing import Any, Dict, Iterable, Optional, Sequence, Union

import numpy as np

from mlrt.exceptions import DomainError, ValidationError
from mlrt.models.base_model import BaseModel

SUM_TOLERANCE = 1e-12


class Distribution(BaseModel):
    """Strictly positive probability vector; immutable once built."""

    def __init__(self, probs: Union[Sequence[float], np.ndarray], name: Optional[str] = None):
        arr = np.array(probs, dtype=float)
        field = name or 'probs'
        if arr.ndim != 1:
            raise ValidationError("Distribution must be a one-dimensional vector", field=field)
        if arr.size < 2:
            raise ValidationError("Alphabet size must be at least 2", field=field,
                                  value=int(arr.size))
        if not np.all(np.isfinite(arr)):
            raise DomainError("Distribution entries must be finite", field=field)
        if np.any(arr <= 0.0):
            raise DomainError("Distribution entries must be strictly positive", field=field)
        total = float(arr.sum())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValidationError(f"Distribution must sum to 1 (got {total!r})", field=field,
                                  value=total)
        arr = arr / total
        arr.setflags(write=False)
        self._probs = arr
        self.name = name

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def alphabet_size(self) -> int:
        return int(self._probs.size)

    def __len__(self) -> int:
        return self.alphabet_size

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        if dtype is None:
            return self._probs.copy()
        return self._probs.astype(dtype)

    def __repr__(self) -> str:
        label = f"{self.name} " if self.name else ""
        return f"<Distribution {label}{np.array2string(self._probs, precision=6)}>"

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Distribution):
            return False
        return bool(np.array_equal(self._probs, other._probs))

    def __hash__(self) -> int:
        return hash(self._probs.tobytes())

    def allclose(self, other: 'Distribution', atol: float = 1e-12) -> bool:
        """Entrywise comparison within an absolute tolerance."""
        return bool(other.alphabet_size == self.alphabet_size
                    and np.allclose(self._probs, other.probs, rtol=0.0, atol=atol))

    @classmethod
    def bernoulli(cls, p: float) -> 'Distribution':
        """Bern(p) = [1 - p, p] over {0, 1}."""
        return cls([1.0 - p, p], name=f"Bern({p:g})")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Distribution':
        return cls(data['probs'], name=data.get('name'))

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {'probs': [float(x) for x in self._probs]}
        if self.name:
            result['name'] = self.name
        return result


class EmpiricalType(BaseModel):
    """Symbol counts of a length-n sequence."""

    def __init__(self, counts: Union[Sequence[int], np.ndarray]):
        arr = np.asarray(counts)
        if arr.ndim != 1 or arr.size < 2:
            raise ValidationError("counts must be a vector over an alphabet of size >= 2",
                                  field='counts')
        if not np.all(np.equal(np.mod(arr, 1), 0)) or np.any(arr < 0):
            raise ValidationError("counts must be nonnegative integers", field='counts')
        arr = arr.astype(np.int64)
        if arr.sum() < 1:
            raise ValidationError("sequence length must be >= 1", field='n', value=int(arr.sum()))
        arr.setflags(write=False)
        self._counts = arr

    @property
    def counts(self) -> np.ndarray:
        return self._counts

    @property
    def n(self) -> int:
        return int(self._counts.sum())

    @property
    def alphabet_size(self) -> int:
        return int(self._counts.size)

    def as_distribution(self) -> np.ndarray:
        """Closed-simplex point counts / n; zeros are allowed."""
        return self._counts / float(self.n)

    @classmethod
    def from_sequence(cls, symbols: Iterable[int], alphabet_size: int) -> 'EmpiricalType':
        seq = np.fromiter(symbols, dtype=np.int64)
        if seq.size and (seq.min() < 0 or seq.max() >= alphabet_size):
            raise ValidationError("symbol outside alphabet", field='symbols')
        return cls(np.bincount(seq, minlength=alphabet_size))

    def __repr__(self) -> str:
        return f"<EmpiricalType n={self.n} counts={self._counts.tolist()}>"

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, EmpiricalType):
            return False
        return bool(np.array_equal(self._counts, other._counts))

    def __hash__(self) -> int:
        return hash(self._counts.tobytes())

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EmpiricalType':
        return cls(data['counts'])

    def to_dict(self) -> Dict[str, Any]:
        return {'counts': self._counts.tolist(), 'n': self.n}
