# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

from typing import Tuple


class AInfinityError(Exception):
    """Common base of every error raised on purpose by the library."""
    pass


class InvalidData(AInfinityError, ValueError):
    pass


class InvalidFace(InvalidData):
    pass


class InvalidTree(InvalidData):
    pass


class InvalidLeafSequence(InvalidData):
    pass


class InvalidMonomial(InvalidData):
    pass


class ArityMismatch(AInfinityError, ValueError):
    def __init__(self, left: Tuple[int, int], right: Tuple[int, int], what: str = "compose") -> None:
        super().__init__(
            f"{what}: arity mismatch between (out={left[0]}, in={left[1]}) "
            f"and (out={right[0]}, in={right[1]})"
        )
        self.left = left
        self.right = right


class NotBlockTransverse(AInfinityError, ValueError):
    pass


class MissingGenerator(AInfinityError, ValueError):
    def __init__(self, name: str) -> None:
        super().__init__(f"no matrix for generator {name!r}")
        self.name = name


class ShapeMismatch(AInfinityError, ValueError):
    pass


class WindowInsufficient(AInfinityError, ValueError):
    pass


class DiagonalIncomplete(AInfinityError, RuntimeError):
    def __init__(self, face: str) -> None:
        super().__init__(f"diagonal-incomplete: no diagonal available on face {face}")
        self.face = face


class NonConvergence(AInfinityError, RuntimeError):
    pass
