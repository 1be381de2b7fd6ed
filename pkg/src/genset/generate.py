"""Deciding the k-generator and k-base properties of a set family.

The reachability table over all 2^n target masks is stored as one big int per
layer (bit x set iff mask x is expressible). The layer step "extend every
reachable mask by a disjoint member g" becomes a masked shift: positions x
with x & g == 0 move to x | g = x + g, so

    layer |= (layer & disjoint_positions(g)) << g

which keeps the whole DP inside a handful of wide bit operations per member.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import CapExceeded, GensetError, WorkLimitExceeded
from .families import SetFamily, SubsetMask, check_mask

# Tables of 2^n bits per layer; 26 -> 8 MiB per layer.
DEFAULT_DP_CAP = 26
# The base check builds k numpy arrays of 2^n int64 entries.
DEFAULT_BASE_CAP = 18
DEFAULT_WORK_LIMIT = 50_000_000


@dataclass(frozen=True)
class GeneratorVerdict:
    holds: bool
    counterexample: Optional[SubsetMask] = None


@dataclass(frozen=True)
class Decomposition:
    parts: tuple[SubsetMask, ...]


def _bit_clear_pattern(b: int, n: int) -> int:
    """Bitmap over all 2^n positions x with bit b of x clear, built by doubling."""
    width = 1 << (b + 1)
    block = (1 << (1 << b)) - 1
    total = 1 << n
    while width < total:
        block |= block << width
        width *= 2
    return block


def _membership_bitmap(fam: SetFamily) -> int:
    size = 1 << fam.n
    buf = bytearray(size // 8 if size >= 8 else 1)
    for g in fam.members:
        buf[g >> 3] |= 1 << (g & 7)
    return int.from_bytes(buf, "little")


def reachable_layers(fam: SetFamily, k: int, dp_cap: int = DEFAULT_DP_CAP) -> list[int]:
    """Layers 0..k of the disjoint-union DP, each a 2^n-bit bitmap.

    Bit x of layer j is set iff mask x is a union of at most j pairwise
    disjoint members. Empty members are skipped: they never extend a union.
    """
    if k < 0:
        raise GensetError("k must be >= 0")
    if fam.n > dp_cap:
        raise CapExceeded(f"n={fam.n} exceeds DP cap {dp_cap} (2^n-bit tables)")
    n = fam.n
    size = 1 << n
    full = (1 << size) - 1
    layers = [1]  # layer 0: only the empty set
    if k == 0:
        return layers
    # Layer 1 is just membership (plus the empty set); no shifts needed.
    layers.append(1 | _membership_bitmap(fam))
    patterns = [_bit_clear_pattern(b, n) for b in range(n)]
    nonempty = [g for g in fam.members if g]
    for _ in range(2, k + 1):
        prev = layers[-1]
        if prev == full:
            layers.append(prev)
            continue
        cur = prev
        for g in nonempty:
            disj = full
            gg = g
            while gg:
                b = (gg & -gg).bit_length() - 1
                disj &= patterns[b]
                gg &= gg - 1
            cur |= (prev & disj) << g
        layers.append(cur)
    return layers


def _smallest_unset(bitmap: int, size: int) -> int:
    inv = ~bitmap & ((1 << size) - 1)
    return (inv & -inv).bit_length() - 1


def is_k_generator(fam: SetFamily, k: int, dp_cap: int = DEFAULT_DP_CAP) -> GeneratorVerdict:
    """Does every subset of [n] split into at most k disjoint members?

    On failure the counterexample is the numerically smallest uncovered mask.
    """
    layers = reachable_layers(fam, k, dp_cap=dp_cap)
    size = 1 << fam.n
    covered = layers[min(k, len(layers) - 1)]
    if covered == (1 << size) - 1:
        return GeneratorVerdict(True)
    return GeneratorVerdict(False, _smallest_unset(covered, size))


def decompose(
    fam: SetFamily, k: int, x: SubsetMask, dp_cap: int = DEFAULT_DP_CAP
) -> Optional[Decomposition]:
    """A witness split of x into at most k disjoint nonempty members, if one exists.

    Greedy largest-first over the DP layers; parts are returned in descending
    mask order. Returns None when x is not expressible.
    """
    check_mask(x, fam.n)
    layers = reachable_layers(fam, k, dp_cap=dp_cap)
    if not (layers[k] >> x) & 1:
        return None
    members_desc = sorted((g for g in fam.members if g), reverse=True)
    parts = []
    cur = x
    j = k
    while cur:
        if (layers[j - 1] >> cur) & 1:
            j -= 1
            continue
        for g in members_desc:
            if g & ~cur:
                continue
            if (layers[j - 1] >> (cur ^ g)) & 1:
                parts.append(g)
                cur ^= g
                j -= 1
                break
        else:  # pragma: no cover - contradicts the DP recurrence
            raise AssertionError("DP table inconsistent with its own recurrence")
    return Decomposition(tuple(sorted(parts, reverse=True)))


def _subset_zeta(a, n: int):
    for b in range(n):
        step = 1 << b
        v = a.reshape(-1, 2 * step)
        v[:, step:] += v[:, :step]
    return a


def _subset_mobius(a, n: int):
    for b in range(n):
        step = 1 << b
        v = a.reshape(-1, 2 * step)
        v[:, step:] -= v[:, :step]
    return a


def is_k_base(fam: SetFamily, k: int, base_cap: int = DEFAULT_BASE_CAP) -> GeneratorVerdict:
    """Like is_k_generator but unions may overlap.

    Layer step is an OR-convolution with the membership indicator, computed
    through subset zeta/Moebius transforms: the pair count with union exactly
    x is mobius(zeta(covered) * zeta(members))[x].
    """
    import numpy as np

    if k < 0:
        raise GensetError("k must be >= 0")
    if fam.n > base_cap:
        raise CapExceeded(f"n={fam.n} exceeds base-check cap {base_cap}")
    n = fam.n
    size = 1 << n
    memb = np.zeros(size, dtype=np.int64)
    memb[list(fam.members)] = 1
    zm = _subset_zeta(memb.copy(), n)
    covered = np.zeros(size, dtype=bool)
    covered[0] = True
    for _ in range(k):
        if covered.all():
            break
        zc = _subset_zeta(covered.astype(np.int64), n)
        pairs = _subset_mobius(zc * zm, n)
        covered |= pairs > 0
    if covered.all():
        return GeneratorVerdict(True)
    return GeneratorVerdict(False, int(np.flatnonzero(~covered)[0]))


def count_disjoint_tuples(
    fam: SetFamily, k: int, work_limit: int = DEFAULT_WORK_LIMIT
) -> int:
    """Number of unordered tuples of at most k pairwise disjoint distinct members.

    The empty tuple counts once (it generates the empty set). The empty set,
    if a member, is disjoint from everything and participates normally.
    """
    if k < 0:
        raise GensetError("k must be >= 0")
    members = fam.members
    m = len(members)
    work = 0

    def rec(start: int, used: int, left: int) -> int:
        nonlocal work
        total = 1
        if left == 0:
            return total
        for j in range(start, m):
            work += 1
            if work > work_limit:
                raise WorkLimitExceeded(
                    f"disjoint-tuple enumeration exceeded {work_limit} steps"
                )
            g = members[j]
            if g & used == 0:
                total += rec(j + 1, used | g, left - 1)
        return total

    return rec(0, 0, min(k, m))
