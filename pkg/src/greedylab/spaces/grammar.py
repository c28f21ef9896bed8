"""
Recursive-descent parser for the space and weight grammar.

    space  := lp:<p> | c0 | lorentz:p=<p>,q=<q|inf>,w=<W> | marcin:w=<W>
            | garling:p=<p>,w=<W> | vp:<p> | sw:w=<W> | kt(<space> ; w=<W>)
            | dsum(<space>,<space>,...) | mixed:q=<q>,p=<p>,blocks=<n1,n2,...>
    W      := const:<c> | pot:<alpha> | expl:[w1,...;tail=<c>]

Whitespace is allowed between tokens. Errors report the character position.
"""

import math
import re
from functools import lru_cache
from typing import Callable, Dict, List, Optional

from greedylab.errors import SpaceParseError
from greedylab.foundations.weights import WeightSpec
from greedylab.spaces.norms import (
    DEFAULT_CERTIFICATION,
    C0Space,
    CertificationConfig,
    DirectSum,
    GarlingSpace,
    KTSpace,
    LorentzSpace,
    LpSpace,
    MarcinkiewiczSpace,
    MixedNormSpace,
    SequenceSpace,
    SwSpace,
    VpSpace,
)

_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?|inf")
_INTEGER = re.compile(r"\d+")
_KEYWORD = re.compile(r"[a-z][a-z0-9]*")


class _Parser:
    def __init__(self, text: str, config: CertificationConfig):
        self.text = text
        self.pos = 0
        self.config = config
        self._spaces: Dict[str, Callable[[], SequenceSpace]] = {
            "lp": self._lp,
            "c0": lambda: C0Space(),
            "lorentz": self._lorentz,
            "marcin": self._marcin,
            "garling": self._garling,
            "vp": self._vp,
            "sw": self._sw,
            "kt": self._kt,
            "dsum": self._dsum,
            "mixed": self._mixed,
        }

    def error(self, message: str) -> SpaceParseError:
        return SpaceParseError(message, self.text, self.pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at(self, literal: str) -> bool:
        self.skip()
        return self.text.startswith(literal, self.pos)

    def expect(self, literal: str) -> None:
        if not self.at(literal):
            raise self.error(f"Expected {literal!r}")
        self.pos += len(literal)

    def _match(self, pattern: "re.Pattern[str]", what: str) -> str:
        self.skip()
        match = pattern.match(self.text, self.pos)
        if match is None:
            raise self.error(f"Expected {what}")
        self.pos = match.end()
        return match.group(0)

    def number(self) -> float:
        token = self._match(_NUMBER, "a number")
        return math.inf if token == "inf" else float(token)

    def integer(self) -> int:
        return int(self._match(_INTEGER, "a positive integer"))

    def keyword(self) -> str:
        start = self.pos
        word = self._match(_KEYWORD, "a space name")
        if word not in self._spaces:
            self.pos = start
            raise self.error(f"Unknown space {word!r}")
        return word

    def finish(self) -> None:
        self.skip()
        if self.pos != len(self.text):
            raise self.error("Unexpected trailing input")

    # --- weights ---

    def weight(self) -> WeightSpec:
        if self.at("const:"):
            self.expect("const:")
            return WeightSpec.constant(self.number())
        if self.at("pot:"):
            self.expect("pot:")
            return WeightSpec.potential(self.number())
        if self.at("expl:"):
            self.expect("expl:")
            self.expect("[")
            values = [self.number()]
            while self.at(","):
                self.expect(",")
                values.append(self.number())
            self.expect(";")
            self.expect("tail=")
            tail = self.number()
            self.expect("]")
            return WeightSpec.from_values(values, tail)
        raise self.error("Expected a weight (const:, pot: or expl:)")

    # --- spaces ---

    def space(self) -> SequenceSpace:
        return self._spaces[self.keyword()]()

    def _lp(self) -> SequenceSpace:
        self.expect(":")
        return LpSpace(self.number())

    def _lorentz(self) -> SequenceSpace:
        self.expect(":")
        self.expect("p=")
        p = self.number()
        self.expect(",")
        self.expect("q=")
        q = self.number()
        self.expect(",")
        self.expect("w=")
        return LorentzSpace(p, q, self.weight(), config=self.config)

    def _marcin(self) -> SequenceSpace:
        self.expect(":")
        self.expect("w=")
        return MarcinkiewiczSpace(self.weight())

    def _garling(self) -> SequenceSpace:
        self.expect(":")
        self.expect("p=")
        p = self.number()
        self.expect(",")
        self.expect("w=")
        return GarlingSpace(p, self.weight())

    def _vp(self) -> SequenceSpace:
        self.expect(":")
        return VpSpace(self.number())

    def _sw(self) -> SequenceSpace:
        self.expect(":")
        self.expect("w=")
        return SwSpace(self.weight())

    def _kt(self) -> SequenceSpace:
        self.expect("(")
        inner = self.space()
        self.expect(";")
        self.expect("w=")
        weight = self.weight()
        self.expect(")")
        return KTSpace(inner, weight)

    def _dsum(self) -> SequenceSpace:
        self.expect("(")
        parts: List[SequenceSpace] = [self.space()]
        while self.at(","):
            self.expect(",")
            parts.append(self.space())
        self.expect(")")
        return DirectSum(tuple(parts))

    def _mixed(self) -> SequenceSpace:
        self.expect(":")
        self.expect("q=")
        q = self.number()
        self.expect(",")
        self.expect("p=")
        p = self.number()
        self.expect(",")
        self.expect("blocks=")
        blocks = [self.integer()]
        # Block lengths continue while a comma is followed by a digit.
        while self.at(","):
            mark = self.pos
            self.expect(",")
            self.skip()
            if self.pos < len(self.text) and self.text[self.pos].isdigit():
                blocks.append(self.integer())
            else:
                self.pos = mark
                break
        return MixedNormSpace(q, p, tuple(blocks))


@lru_cache(maxsize=256)
def _parse_default(text: str) -> SequenceSpace:
    parser = _Parser(text, DEFAULT_CERTIFICATION)
    space = parser.space()
    parser.finish()
    return space


def parse_space(text: str, config: Optional[CertificationConfig] = None) -> SequenceSpace:
    """
    Parse a space description into a validated SequenceSpace.

    Args:
        text: Space description following the module grammar
        config: Certification settings; the default configuration is cached

    Returns:
        The parsed space.

    Raises:
        SpaceParseError: On grammar violations, with the character position.
        ParameterError: On invalid parameters (e.g. a non-doubling Lorentz weight).
    """
    if config is None or config == DEFAULT_CERTIFICATION:
        return _parse_default(text)
    parser = _Parser(text, config)
    space = parser.space()
    parser.finish()
    return space


def parse_weight(text: str) -> WeightSpec:
    """Parse a weight description such as ``pot:0.5`` or ``expl:[1,2;tail=1]``."""
    parser = _Parser(text, DEFAULT_CERTIFICATION)
    weight = parser.weight()
    parser.finish()
    return weight
