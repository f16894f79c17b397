import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from classify.bounds import BOUNDS, CASE_SHAPES, EMPTY_CASES
from models.data_models import DefiningData

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

Key = Tuple[int, ...]


class Shard(NamedTuple):
    case: str
    subcase: str
    key: Key

    @property
    def name(self) -> str:
        return "_".join([self.subcase] + [str(k) for k in self.key])


@dataclass(frozen=True)
class SubCase:
    label: str
    case: str
    outer: Callable[[], Iterable[Key]]
    inner: Callable[[Key], Iterator[DefiningData]]


def open_range(lo, hi) -> range:
    """Integers x with lo < x < hi"""
    return range(floor(Fraction(lo)) + 1, ceil(Fraction(hi)))


def closed_range(lo, hi) -> range:
    """Integers x with lo <= x <= hi"""
    return range(ceil(Fraction(lo)), floor(Fraction(hi)) + 1)


# block shapes

def tower_221(l11, l12, l21, d111, d112, d121, d211, d212, d221) -> DefiningData:
    return DefiningData(
        r=2, s=2, m=0, n=(2, 2, 1), L=((1, 1), (l11, l12), (l21,)),
        d=((0, 1, d111, d112, d121), (0, 0, d211, d212, d221)),
    )


def tower_2211(l21, l31, d111, d121, d131, d211, d221, d231) -> DefiningData:
    return DefiningData(
        r=3, s=2, m=0, n=(2, 2, 1, 1), L=((1, 1), (1, 1), (l21,), (l31,)),
        d=((0, 1, d111, 0, d121, d131), (0, 0, d211, 0, d221, d231)),
    )


def tower_311(l11, l21, d111, d121, d211, d221) -> DefiningData:
    return DefiningData(
        r=2, s=2, m=0, n=(3, 1, 1), L=((1, 1, 1), (l11,), (l21,)),
        d=((0, 1, 0, d111, d121), (0, 0, 1, d211, d221)),
    )


def tower_211_extra(l11, l21, d111, d121, d211, d221) -> DefiningData:
    return DefiningData(
        r=2, s=2, m=1, n=(2, 1, 1), L=((1, 1), (l11,), (l21,)),
        d=((0, 1, d111, d121), (0, 0, d211, d221)),
        dprime=((0,), (1,)),
    )


def tower_221_weights(l11, l12, l21, d111, d112, d121, d211, d212, d221) -> Tuple[int, int, int, int, int]:
    """Kernel vector (w01, w02, w11, w12, w21) of the 2-2-1 shape"""
    w11 = -l21 * d212 - l12 * d221
    w12 = l21 * d211 + l11 * d221
    w21 = -l11 * d212 + l12 * d211
    w02 = -d111 * w11 - d112 * w12 - d121 * w21
    w01 = l21 * w21 - w02
    return w01, w02, w11, w12, w21


def trapezoid_heights(l11, l12, l21, w11, w12) -> Tuple[Fraction, Fraction]:
    return Fraction(w12, l11 + l21), Fraction(-w11, l12 + l21)


def _normal_form_tail(l11, l12, l21, d121, d211, d212, d221) -> Iterator[DefiningData]:
    """Close a 2-2-1 candidate over d112 and d111 in the normal-form ranges"""
    _, _, w11, w12, w21 = tower_221_weights(l11, l12, l21, 0, 0, d121, d211, d212, d221)
    if w11 <= 0:
        return
    for d112 in range(0, w11):
        lo = Fraction(-((l21 + d121) * w21 + d112 * w12), w11)
        hi = Fraction(-(d121 * w21 + d112 * w12), w11)
        for d111 in open_range(lo, hi):
            yield tower_221(l11, l12, l21, d111, d112, d121, d211, d212, d221)


def _normal_form_lower(l21: int) -> Iterator[Tuple[int, int]]:
    for d221 in range(l21):
        for d121 in range(l21):
            if d221 != 0 and d121 >= d221:
                continue
            yield d121, d221


# case (i): r = 2, n = (2, 2, 1)

def _unit_outer() -> Iterator[Key]:
    caps = BOUNDS["i.unit"].caps
    for l21 in range(2, caps["volume"]):
        for d211 in range(1, caps["volume"] // (l21 + 1) + 1):
            if caps["volume_min"] <= (l21 + 1) * d211 <= caps["volume"]:
                yield l21, d211


def _unit_inner(key: Key) -> Iterator[DefiningData]:
    l21, d211 = key
    for d111 in range(0, d211):
        for d221 in open_range(-d211 * l21, 0):
            for d121 in open_range(Fraction(d111 * d221, d211) - l21, 0):
                yield tower_221(1, 1, l21, d111, 0, d121, d211, 0, d221)


def _l21_2_outer(label: str) -> Callable[[], Iterator[Key]]:
    def outer():
        for l11 in range(1, BOUNDS[label].caps["l11"] + 1):
            yield (l11,)
    return outer


def _l21_2_inner(label: str, d121: int, d221: int) -> Callable[[Key], Iterator[DefiningData]]:
    caps = BOUNDS[label].caps
    weight_cap = caps["weight_sum"] - 2
    l21 = 2

    def inner(key: Key) -> Iterator[DefiningData]:
        (l11,) = key
        for l12 in range(1, l11 + 1):
            for d212 in closed_range(Fraction(-weight_cap - l12 * d221, l21), Fraction(-1 - l12 * d221, l21)):
                for d211 in closed_range(Fraction(1 - l11 * d221, l21), Fraction(weight_cap - l11 * d221, l21)):
                    _, _, w11, w12, w21 = tower_221_weights(l11, l12, l21, 0, 0, d121, d211, d212, d221)
                    if min(w11, w12, w21) < 1 or w11 + w12 + w21 > caps["weight_sum"]:
                        continue
                    h1, h2 = trapezoid_heights(l11, l12, l21, w11, w12)
                    if not (h1 < caps["h1_below"] and h2 > caps["h2_above"]):
                        continue
                    yield from _normal_form_tail(l11, l12, l21, d121, d211, d212, d221)
    return inner


def _d111_between(d121, d211, d221, l21) -> range:
    return open_range(Fraction(d121 * d211, d221) + Fraction(l21 * d211, d221), Fraction(d121 * d211, d221))


def _low_b_outer() -> Iterator[Key]:
    caps = BOUNDS["i.l21_2.low.b"].caps
    for d221 in range(caps["d221_min"], caps["d221_max"] + 1):
        yield (d221,)


def _low_b_inner(key: Key) -> Iterator[DefiningData]:
    (d221,) = key
    d211 = 1 - d221
    for d121 in range(0, -d221):
        for d111 in _d111_between(d121, d211, d221, 2):
            yield tower_221(2, 1, 2, d111, 0, d121, d211, 0, d221)


def _low_c_outer() -> Iterator[Key]:
    caps = BOUNDS["i.l21_2.low.c"].caps
    for l11 in range(caps["l11_min"], caps["l11_below"]):
        yield (l11,)


def _low_c_inner(key: Key) -> Iterator[DefiningData]:
    (l11,) = key
    d221_max = BOUNDS["i.l21_2.low.c"].caps["d221_max"]
    for d221 in range(floor(Fraction(-5 * l11 + 2, l11 - 2)) + 1, d221_max + 1):
        centre = Fraction(-l11 * d221, 2)
        for d211 in open_range(centre, centre + Fraction(l11, 2)):
            for d121 in range(0, -d221):
                for d111 in _d111_between(d121, d211, d221, 2):
                    yield tower_221(l11, 1, 2, d111, 0, d121, d211, 0, d221)


def _ge3_a_outer() -> Iterator[Key]:
    for l21, (l12_cap, l11_cap) in sorted(BOUNDS["i.l21_ge3.a"].caps["l_caps"].items()):
        for l11 in range(1, l11_cap + 1):
            for l12 in range(1, min(l11, l12_cap) + 1):
                yield l21, l11, l12


def _ge3_a_inner(key: Key) -> Iterator[DefiningData]:
    l21, l11, l12 = key
    caps = BOUNDS["i.l21_ge3.a"].caps
    for d121, d221 in _normal_form_lower(l21):
        for d212 in open_range(-2 - Fraction(l12 * (d221 + 2), l21), 0):
            low = Fraction(-l11 * d221, l21)
            for d211 in open_range(low, low + 1 + Fraction(l11, l21)):
                _, _, w11, w12, _ = tower_221_weights(l11, l12, l21, 0, 0, d121, d211, d212, d221)
                h1, h2 = trapezoid_heights(l11, l12, l21, w11, w12)
                if not (h1 < caps["h1_below"] and h2 > caps["h2_above"]):
                    continue
                yield from _normal_form_tail(l11, l12, l21, d121, d211, d212, d221)


def _ge3_c_outer() -> Iterator[Key]:
    caps = BOUNDS["i.l21_ge3.c"].caps
    for (d111, d211), l21_cap in sorted(caps["pair_caps"].items()):
        for l21 in range(caps["l21_min"], l21_cap + 1):
            yield d111, d211, l21


def _ge3_c_inner(key: Key) -> Iterator[DefiningData]:
    d111, d211, l21 = key
    for d221 in open_range(-2 * (l21 + 1), 0):
        top = Fraction(d111 * d221, d211)
        for d121 in open_range(top - l21, top):
            yield tower_221(2, 1, l21, d111, 0, d121, d211, 0, d221)


def _ge3_low_b_outer() -> Iterator[Key]:
    for l21 in BOUNDS["i.l21_ge3.low.b"].caps["l21_values"]:
        yield (l21,)


def _ge3_low_b_inner(key: Key) -> Iterator[DefiningData]:
    (l21,) = key
    for d221 in open_range(-4 * (l21 + 1), 0):
        for d211 in open_range(Fraction(-2 * d221, l21), Fraction(-2 * (d221 - 1), l21) + 1):
            for d121 in range(0, -d221):
                for d111 in _d111_between(d121, d211, d221, l21):
                    yield tower_221(2, 1, l21, d111, 0, d121, d211, 0, d221)


# case (iv): r = 2, n = (3, 1, 1)

def _iv_a_outer() -> Iterator[Key]:
    for l11 in range(2, BOUNDS["iv.l21_2.a"].caps["l11"] + 1):
        yield (l11,)


def _iv_a_inner(key: Key) -> Iterator[DefiningData]:
    (l11,) = key
    for d211 in open_range(Fraction(-l11, 2) - 1, 0):
        for d111 in range(-l11, ceil(Fraction(-l11, 2))):
            yield tower_311(l11, 2, d111, 1, d211, 0)


def _iv_b_outer() -> Iterator[Key]:
    for d111 in range(BOUNDS["iv.l21_2.b"].caps["d111_min"], 0):
        yield (d111,)


def _iv_b_inner(key: Key) -> Iterator[DefiningData]:
    (d111,) = key
    for d211 in range(d111, 0):
        for l11 in range(max(2, -d111), -2 * d211):
            yield tower_311(l11, 2, d111, 1, d211, 1)


def _lower_window(l11, l21, d) -> range:
    """d-values of a single column block in the open window below -(l11 / l21) d"""
    return open_range(Fraction(-l11 * (d + 1), l21) - 1, Fraction(-l11 * d, l21))


def _iv_3_outer() -> Iterator[Key]:
    for (d121, d221), l11_cap in sorted(BOUNDS["iv.l21_3"].caps["pair_caps"].items()):
        for l11 in range(3, l11_cap + 1):
            yield d121, d221, l11


def _iv_3_inner(key: Key) -> Iterator[DefiningData]:
    d121, d221, l11 = key
    for d111 in _lower_window(l11, 3, d121):
        for d211 in _lower_window(l11, 3, d221):
            yield tower_311(l11, 3, d111, d121, d211, d221)


def _iv_45_outer() -> Iterator[Key]:
    for l21 in BOUNDS["iv.l21_4_5"].caps["l21_values"]:
        for l11 in range(l21, ceil(Fraction(3 * l21, l21 - 3))):
            yield l21, l11


def _iv_45_inner(key: Key) -> Iterator[DefiningData]:
    l21, l11 = key
    for d121 in range(l21):
        for d221 in range(l21):
            for d111 in open_range(Fraction(-l11 * d121, l21) - l11, Fraction(-l11 * d121, l21)):
                for d211 in open_range(Fraction(-l11 * d221, l21) - l11, Fraction(-l11 * d221, l21)):
                    yield tower_311(l11, l21, d111, d121, d211, d221)


# case (ii): r = 3, n = (2, 2, 1, 1)

def _ii_2_outer() -> Iterator[Key]:
    for (d131, d231), l21_cap in sorted(BOUNDS["ii.l31_2"].caps["pair_caps"].items()):
        for l21 in range(2, l21_cap + 1):
            yield d131, d231, l21


def _ii_d211_window(l21, l31, d221, d231) -> range:
    low = Fraction(-d221, l21) - Fraction(d231, l31)
    return open_range(low, low + Fraction(l31 + l21, l31 * l21))


def _ii_2_inner(key: Key) -> Iterator[DefiningData]:
    d131, d231, l21 = key
    for d221 in _lower_window(l21, 2, d231):
        for d211 in _ii_d211_window(l21, 2, d221, d231):
            top = Fraction(-l21 * d131, 2)
            for d121 in open_range(top - l21, top):
                yield tower_2211(l21, 2, 0, d121, d131, d211, d221, d231)


def _ii_3_outer() -> Iterator[Key]:
    for l21 in BOUNDS["ii.l31_3"].caps["l21_values"]:
        for d131 in range(3):
            for d231 in range(3):
                yield l21, d131, d231


def _ii_3_inner(key: Key) -> Iterator[DefiningData]:
    l21, d131, d231 = key
    for d221 in _lower_window(l21, 3, d231):
        for d211 in _ii_d211_window(l21, 3, d221, d231):
            for d111 in range(0, 3 * d211):
                x = Fraction(d111 * (l21 * d231 + 3 * d221) - l21 * d211 * d131, 3 * d211)
                for d121 in open_range(x - l21, x):
                    yield tower_2211(l21, 3, d111, d121, d131, d211, d221, d231)


# case (vi): r = 2, n = (2, 1, 1), m = 1

def _vi_outer() -> Iterator[Key]:
    for l21, l11_cap in sorted(BOUNDS["vi"].caps["l11_caps"].items()):
        for l11 in range(l21, l11_cap + 1):
            yield l21, l11


def _vi_inner(key: Key) -> Iterator[DefiningData]:
    l21, l11 = key
    for d121 in range(l21):
        top = Fraction(-l11 * d121, l21)
        for d221 in range(l21):
            for d111 in open_range(top - l21, top):
                for d211 in _lower_window(l11, l21, d221):
                    yield tower_211_extra(l11, l21, d111, d121, d211, d221)


SUBCASES: Dict[str, SubCase] = {sub.label: sub for sub in [
    SubCase("i.unit", "i", _unit_outer, _unit_inner),
    SubCase("i.l21_2.a", "i", _l21_2_outer("i.l21_2.a"), _l21_2_inner("i.l21_2.a", d121=1, d221=0)),
    SubCase("i.l21_2.b", "i", _l21_2_outer("i.l21_2.b"), _l21_2_inner("i.l21_2.b", d121=0, d221=1)),
    SubCase("i.l21_2.low.b", "i", _low_b_outer, _low_b_inner),
    SubCase("i.l21_2.low.c", "i", _low_c_outer, _low_c_inner),
    SubCase("i.l21_ge3.a", "i", _ge3_a_outer, _ge3_a_inner),
    SubCase("i.l21_ge3.c", "i", _ge3_c_outer, _ge3_c_inner),
    SubCase("i.l21_ge3.low.b", "i", _ge3_low_b_outer, _ge3_low_b_inner),
    SubCase("iv.l21_2.a", "iv", _iv_a_outer, _iv_a_inner),
    SubCase("iv.l21_2.b", "iv", _iv_b_outer, _iv_b_inner),
    SubCase("iv.l21_3", "iv", _iv_3_outer, _iv_3_inner),
    SubCase("iv.l21_4_5", "iv", _iv_45_outer, _iv_45_inner),
    SubCase("ii.l31_2", "ii", _ii_2_outer, _ii_2_inner),
    SubCase("ii.l31_3", "ii", _ii_3_outer, _ii_3_inner),
    SubCase("vi", "vi", _vi_outer, _vi_inner),
]}


def subcases_for(case: str) -> List[SubCase]:
    if case not in CASE_SHAPES:
        raise ValueError(f"unknown case {case!r}")
    return [sub for sub in SUBCASES.values() if sub.case == case]


def shards(cases: Sequence[str], limit: Optional[int] = None) -> List[Shard]:
    """Work units (case, subcase, outer key) in a deterministic order"""
    found = []
    for case in cases:
        if case in EMPTY_CASES:
            logger.info(f"Case {case} is empty, no shards")
        for sub in subcases_for(case):
            found.extend(Shard(case, sub.label, tuple(key)) for key in sub.outer())
    if limit is not None:
        found = found[:limit]
    logger.info(f"Prepared {len(found)} shards for cases {', '.join(cases)}")
    return found


def enumerate_shard(shard: Shard) -> Iterator[DefiningData]:
    yield from SUBCASES[shard.subcase].inner(shard.key)


def enumerate_case(case: str) -> Iterator[DefiningData]:
    """All candidate defining data of one case before any filtering"""
    for sub in subcases_for(case):
        for key in sub.outer():
            yield from sub.inner(key)
