"""Seeded constrained-random stimulus generation.

Random fields are declared as class attributes on a :class:`RandObj`::

    class Packet(RandObj):
        kind = rand_bit_t(2)
        length = RandField(8, ranges=[(1, 64)])
        tag = bit_t(4)                      # not randomized

    pkt = Packet()
    pkt.randomize(Rng(1))

Only inclusive interval constraints are supported, so every draw is direct
(no rejection loop over predicates).
"""

import enum
import math

MASK64 = (1 << 64) - 1


def fnv1a_64(text):
    """64-bit FNV-1a hash of a string (stable across processes)."""
    h = 0xCBF29CE484222325
    for b in text.encode():
        h = ((h ^ b) * 0x100000001B3) & MASK64
    return h


def derive_seed(seed, name):
    return (int(seed) ^ fnv1a_64(name)) & MASK64


def parse_seed(text):
    """Accept decimal or 0x-prefixed hex seeds."""
    text = str(text).strip()
    value = int(text, 16) if text.lower().startswith("0x") else int(text, 10)
    if not 0 <= value <= MASK64:
        raise ValueError(f"seed {text} outside 64-bit range")
    return value


class Rng:
    """SplitMix64 generator."""

    __slots__ = ("state",)

    def __init__(self, seed=0):
        self.state = int(seed) & MASK64

    @classmethod
    def for_path(cls, seed, path):
        return cls(derive_seed(seed, path))

    def next_u64(self):
        self.state = z = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n):
        """Uniform integer in [0, n), unbiased."""
        if n <= 0:
            raise ValueError("below() needs n > 0")
        if n > 1 << 64:
            # stitch several 64-bit words together
            words = (n.bit_length() + 63) // 64
            limit = (1 << (64 * words)) // n * n
            while True:
                x = 0
                for _ in range(words):
                    x = (x << 64) | self.next_u64()
                if x < limit:
                    return x % n
        limit = (1 << 64) // n * n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo, hi):
        if lo > hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.below(hi - lo + 1)

    def random(self):
        """Uniform float in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo, hi):
        return lo + (hi - lo) * self.random()

    def gauss(self, mu=0.0, sigma=1.0):
        # Box-Muller; 1 - random() keeps the log argument in (0, 1]
        u1 = 1.0 - self.random()
        u2 = self.random()
        return mu + sigma * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def choice(self, seq):
        return seq[self.below(len(seq))]


class SamplingPolicy(enum.Enum):
    UNIFORM_DOMAIN = "uniform-over-domain"
    UNIFORM_RANGES = "uniform-over-ranges"


class UnsatisfiableError(ValueError):
    pass


def _check_ranges(ranges):
    ranges = [(int(lo), int(hi)) for lo, hi in ranges]
    if not ranges:
        raise ValueError("empty range list")
    for lo, hi in ranges:
        if lo > hi:
            raise ValueError(f"range [{lo}, {hi}] is empty")
    return ranges


def merge_ranges(ranges):
    """Sorted union of inclusive ranges with overlaps/adjacency merged."""
    out = []
    for lo, hi in sorted(ranges):
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def intersect_ranges(a, b):
    """Pairwise intersections, kept separate so range identity survives."""
    out = []
    for lo1, hi1 in a:
        for lo2, hi2 in b:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if lo <= hi:
                out.append((lo, hi))
    return out


def rand_in_ranges(ranges, rng, policy=SamplingPolicy.UNIFORM_DOMAIN):
    """Draw one integer lying in one of the inclusive ``ranges``.

    ``UNIFORM_RANGES`` picks a range with probability 1/len(ranges), then a
    value inside it; ``UNIFORM_DOMAIN`` is uniform over the union of values.
    """
    ranges = _check_ranges(ranges)
    if policy is SamplingPolicy.UNIFORM_RANGES:
        lo, hi = ranges[rng.below(len(ranges))]
        return rng.randint(lo, hi)
    merged = merge_ranges(ranges)
    total = sum(hi - lo + 1 for lo, hi in merged)
    r = rng.below(total)
    for lo, hi in merged:
        size = hi - lo + 1
        if r < size:
            return lo + r
        r -= size
    raise AssertionError("unreachable")


def pick_flip_indices(width, count, rng):
    """``count`` distinct bit indices drawn uniformly from [0, width)."""
    if count < 0:
        raise ValueError("negative flip count")
    if count > width:
        raise ValueError(f"cannot pick {count} distinct indices from width {width}")
    pool = list(range(width))
    picked = []
    for i in range(count):
        j = i + rng.below(width - i)
        pool[i], pool[j] = pool[j], pool[i]
        picked.append(pool[i])
    return tuple(sorted(picked))


class RandField:
    """Typed integer attribute of a :class:`RandObj`."""

    def __init__(self, width, signed=False, rand=True, ranges=None, policy=None, default=0):
        if width < 1:
            raise ValueError("field width must be positive")
        self.width = width
        self.signed = signed
        self.rand = rand
        self.policy = policy
        if signed:
            self.domain = (-(1 << (width - 1)), (1 << (width - 1)) - 1)
        else:
            self.domain = (0, (1 << width) - 1)
        if ranges is not None:
            ranges = _check_ranges(ranges)
            dlo, dhi = self.domain
            for lo, hi in ranges:
                if lo < dlo or hi > dhi:
                    raise ValueError(f"range [{lo}, {hi}] outside {width}-bit domain {self.domain}")
        self.ranges = ranges
        self.default = default
        self.name = None

    def __set_name__(self, owner, name):
        self.name = name

    def __get__(self, obj, owner=None):
        if obj is None:
            return self
        return obj.__dict__.get(self.name, self.default)

    def __set__(self, obj, value):
        value = int(value)
        lo, hi = self.domain
        if not lo <= value <= hi:
            raise ValueError(f"{self.name}={value} outside domain [{lo}, {hi}]")
        obj.__dict__[self.name] = value

    def __repr__(self):
        kind = "rand" if self.rand else "nonrand"
        sign = "int" if self.signed else "uint"
        return f"<{kind} {sign}{self.width} {self.name}>"


def rand_bit_t(width=1, **kw):
    return RandField(width, **kw)


def bit_t(width=1, **kw):
    return RandField(width, rand=False, **kw)


def rand_uint8_t(**kw):
    return RandField(8, **kw)


def rand_uint32_t(**kw):
    return RandField(32, **kw)


def rand_int32_t(**kw):
    return RandField(32, signed=True, **kw)


class RandObj:
    """Mixin giving ``randomize`` to classes that declare :class:`RandField` attributes."""

    @classmethod
    def rand_fields(cls):
        cached = cls.__dict__.get("_rand_fields_cache")
        if cached is not None:
            return cached
        seen = {}
        for klass in reversed(cls.__mro__):
            for name, attr in vars(klass).items():
                if isinstance(attr, RandField):
                    seen[name] = attr
        cls._rand_fields_cache = seen
        return seen

    def constrain(self, name, ranges):
        """Add an instance-level range constraint, intersected with the declared one."""
        fields = self.rand_fields()
        if name not in fields:
            raise AttributeError(f"{type(self).__name__} has no field {name!r}")
        self.__dict__.setdefault("_constraints", {})[name] = _check_ranges(ranges)

    def clear_constraints(self):
        self.__dict__.pop("_constraints", None)

    def randomize(self, rng, policy=None):
        fields = self.rand_fields()
        extra = self.__dict__.get("_constraints", {})
        randomized = False
        for name, f in fields.items():
            if not f.rand:
                continue
            randomized = True
            ranges = [f.domain] if f.ranges is None else f.ranges
            pol = policy or f.policy or SamplingPolicy.UNIFORM_DOMAIN
            if name in extra:
                ranges = intersect_ranges(ranges, extra[name])
                if not ranges:
                    raise UnsatisfiableError(f"constraints on field {name!r} have no solution")
            setattr(self, name, rand_in_ranges(ranges, rng, pol))
        if not randomized:
            raise ValueError(f"{type(self).__name__} declares no rand fields")
        self.post_randomize()
        return self

    def post_randomize(self):
        pass
