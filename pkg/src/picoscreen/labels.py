"""Sentence class labels used across the toolkit.

Seven classes cover structured-abstract headings; P, I and O form the
subset that screening and extraction care about (comparators count as
interventions).
"""

from __future__ import annotations

import enum


class ClassLabel(enum.Enum):
    P = "P"  # population
    I = "I"  # intervention (incl. comparator)
    O = "O"  # outcome
    A = "A"  # aim
    M = "M"  # method
    R = "R"  # result
    C = "C"  # conclusion

    def __str__(self) -> str:
        return self.value


# Fixed order: index into probability vectors and tie-break order for argmax.
CLASS_ORDER: tuple[ClassLabel, ...] = (
    ClassLabel.P,
    ClassLabel.I,
    ClassLabel.O,
    ClassLabel.A,
    ClassLabel.M,
    ClassLabel.R,
    ClassLabel.C,
)

PIO: tuple[ClassLabel, ...] = (ClassLabel.P, ClassLabel.I, ClassLabel.O)

N_CLASSES = len(CLASS_ORDER)


class SubClass(enum.Enum):
    """Detail annotations that only occur on population spans."""

    AGE = "AGE"
    GENDER = "GENDER"
    CONDITION = "CONDITION"
    SIZE = "SIZE"


def parse_label(token: str) -> ClassLabel:
    """Map a single-letter label string to a ClassLabel.

    Raises ValueError for anything that is not one of the seven letters.
    """
    try:
        return ClassLabel(token.strip().upper())
    except ValueError:
        raise ValueError(f"unknown class label {token!r}") from None


def class_index(label: ClassLabel) -> int:
    return CLASS_ORDER.index(label)
