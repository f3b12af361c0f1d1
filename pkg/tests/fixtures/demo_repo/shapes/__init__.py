"""Shape primitives for the walkthrough."""

from .geometry import Point, bounding_box

ORIGIN_LABEL: str = "origin"
