"""Covergroups, coverpoints, explicit bins and crosses.

Percentages are kept as exact :class:`fractions.Fraction` values; only the
reporting layer rounds them (to two decimals, half-up).
"""

import copy
import itertools
from fractions import Fraction


class CoverageError(ValueError):
    pass


def percent(frac):
    """Format a coverage fraction as a percentage string with 2 decimals, half-up."""
    scaled = Fraction(frac) * 10000
    n = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    return f"{n // 100}.{n % 100:02d}"


class Bin:
    __slots__ = ("name", "kind", "lo", "hi", "values", "goal", "hits")

    def __init__(self, name, kind, lo, hi, values=None, goal=1, hits=0):
        if kind not in ("value", "range", "set"):
            raise CoverageError(f"unknown bin kind {kind!r}")
        if goal < 1:
            raise CoverageError("bin goal must be positive")
        if "|" in name:
            raise CoverageError(f"bin name {name!r} may not contain '|'")
        self.name = name
        self.kind = kind
        self.lo = lo
        self.hi = hi
        self.values = frozenset(values) if values is not None else None
        self.goal = goal
        self.hits = hits

    @classmethod
    def value(cls, v, name=None, goal=1):
        return cls(str(v) if name is None else name, "value", v, v, goal=goal)

    @classmethod
    def range(cls, lo, hi, name=None, goal=1):
        if lo > hi:
            raise CoverageError(f"bin range ({lo}, {hi}) is empty")
        return cls(f"({lo}, {hi})" if name is None else name, "range", lo, hi, goal=goal)

    @classmethod
    def set(cls, values, name=None, goal=1):
        values = sorted(values)
        if not values:
            raise CoverageError("empty value-set bin")
        if name is None:
            name = "{" + ",".join(map(str, values)) + "}"
        return cls(name, "set", values[0], values[-1], values=values, goal=goal)

    def matches(self, v):
        if self.kind == "set":
            return v in self.values
        return self.lo <= v <= self.hi

    @property
    def covered(self):
        return self.hits >= self.goal

    def shape(self):
        return (self.name, self.kind, self.lo, self.hi, self.values, self.goal)

    def __eq__(self, other):
        if not isinstance(other, Bin):
            return NotImplemented
        return self.shape() == other.shape() and self.hits == other.hits

    def __repr__(self):
        return f"Bin({self.name!r}, hits={self.hits})"


class Coverpoint:
    def __init__(self, name, bins, weight=1):
        if "|" in name:
            raise CoverageError(f"coverpoint name {name!r} may not contain '|'")
        self.name = name
        self.bins = list(bins)
        if not self.bins:
            raise CoverageError(f"coverpoint {name!r} has no bins")
        names = [b.name for b in self.bins]
        if len(set(names)) != len(names):
            raise CoverageError(f"coverpoint {name!r} has duplicate bin names")
        self.weight = weight
        self.samples = 0

    def match(self, v):
        """Indices of every bin ``v`` falls in (possibly none)."""
        return [i for i, b in enumerate(self.bins) if b.matches(v)]

    def _hit(self, idxs):
        self.samples += 1
        bins = self.bins
        for i in idxs:
            bins[i].hits += 1

    def sample(self, v):
        idxs = self.match(v)
        self._hit(idxs)
        return idxs

    @property
    def coverage(self):
        return Fraction(sum(b.covered for b in self.bins), len(self.bins))

    def shape(self):
        return (self.name, tuple(b.shape() for b in self.bins))

    def __eq__(self, other):
        if not isinstance(other, Coverpoint):
            return NotImplemented
        return self.name == other.name and self.bins == other.bins

    def __repr__(self):
        return f"Coverpoint({self.name!r}, {len(self.bins)} bins)"


class Cross:
    """Product bins over member coverpoints; hits keyed by tuples of bin indices."""

    def __init__(self, name, points, goal=1):
        if len(points) < 2:
            raise CoverageError(f"cross {name!r} needs at least two coverpoints")
        self.name = name
        self.points = list(points)
        self.goal = goal
        self.hits = {key: 0 for key in itertools.product(*(range(len(p.bins)) for p in self.points))}

    @property
    def point_names(self):
        return [p.name for p in self.points]

    def _hit(self, matched):
        hits = self.hits
        for key in itertools.product(*matched):
            hits[key] += 1

    def tuple_name(self, key):
        return "|".join(p.bins[i].name for p, i in zip(self.points, key))

    def bins(self):
        """(tuple-name, hits) for every product bin, in product order."""
        return [(self.tuple_name(k), h) for k, h in self.hits.items()]

    def hits_for(self, *bin_names):
        key = tuple(next(i for i, b in enumerate(p.bins) if b.name == n)
                    for p, n in zip(self.points, bin_names))
        return self.hits[key]

    def uncovered(self):
        return [self.tuple_name(k) for k, h in self.hits.items() if h < self.goal]

    @property
    def coverage(self):
        return Fraction(sum(h >= self.goal for h in self.hits.values()), len(self.hits))

    def shape(self):
        return (self.name, tuple(self.point_names), self.goal)

    def __eq__(self, other):
        if not isinstance(other, Cross):
            return NotImplemented
        return self.shape() == other.shape() and self.bins() == other.bins()

    def __repr__(self):
        return f"Cross({self.name!r}, {len(self.hits)} bins)"


class Covergroup:
    """Named set of coverpoints and crosses sampled together."""

    def __init__(self, name, coverpoints=(), crosses=()):
        self.name = name
        self.coverpoints = {}
        self.crosses = {}
        for cp in coverpoints:
            self.add_coverpoint(cp)
        for cr in crosses:
            self.add_cross(cr)

    def add_coverpoint(self, cp):
        if cp.name in self.coverpoints or cp.name in self.crosses:
            raise CoverageError(f"{self.name}: duplicate item {cp.name!r}")
        self.coverpoints[cp.name] = cp
        return cp

    def add_cross(self, name_or_cross, *point_names):
        if isinstance(name_or_cross, Cross):
            cr = name_or_cross
        else:
            cr = Cross(name_or_cross, [self.coverpoints[n] for n in point_names])
        if cr.name in self.coverpoints or cr.name in self.crosses:
            raise CoverageError(f"{self.name}: duplicate item {cr.name!r}")
        for p in cr.points:
            if self.coverpoints.get(p.name) is not p:
                raise CoverageError(f"cross {cr.name!r} member {p.name!r} is not in group {self.name!r}")
        self.crosses[cr.name] = cr
        return cr

    def sample(self, values=None, **kw):
        """Sample a mapping of coverpoint name -> value."""
        if values is None:
            values = kw
        elif kw:
            values = {**values, **kw}
        matched = {}
        for name, cp in self.coverpoints.items():
            try:
                v = values[name]
            except KeyError:
                raise CoverageError(f"{self.name}: sample has no value for {name!r}") from None
            matched[name] = cp.sample(v)
        for cr in self.crosses.values():
            cr._hit([matched[p.name] for p in cr.points])

    def items(self):
        return [*self.coverpoints.values(), *self.crosses.values()]

    @property
    def coverage(self):
        items = self.items()
        if not items:
            return Fraction(0)
        return sum((i.coverage for i in items), Fraction(0)) / len(items)

    def shape(self):
        return (self.name,
                tuple(cp.shape() for cp in self.coverpoints.values()),
                tuple(cr.shape() for cr in self.crosses.values()))

    def merge_hits(self, other):
        if self.shape() != other.shape():
            raise CoverageError(f"covergroup {self.name!r}: shapes differ, cannot merge")
        for name, cp in self.coverpoints.items():
            ocp = other.coverpoints[name]
            cp.samples += ocp.samples
            for b, ob in zip(cp.bins, ocp.bins):
                b.hits += ob.hits
        for name, cr in self.crosses.items():
            ocr = other.crosses[name]
            for key, h in ocr.hits.items():
                cr.hits[key] += h

    def __eq__(self, other):
        if not isinstance(other, Covergroup):
            return NotImplemented
        return (self.name == other.name
                and list(self.coverpoints.values()) == list(other.coverpoints.values())
                and list(self.crosses.values()) == list(other.crosses.values()))

    def __repr__(self):
        return f"Covergroup({self.name!r}, {percent(self.coverage)}%)"


class CoverageDb:
    """Groups collected by one or more test runs plus run metadata."""

    def __init__(self, test="", seed="", transactions=0, groups=()):
        self.test = test
        self.seed = str(seed)
        self.transactions = transactions
        self.groups = {}
        for g in groups:
            self.add_group(g)

    def add_group(self, group):
        if group.name in self.groups:
            raise CoverageError(f"duplicate covergroup {group.name!r}")
        self.groups[group.name] = group
        return group

    @property
    def coverage(self):
        if not self.groups:
            return Fraction(0)
        return sum((g.coverage for g in self.groups.values()), Fraction(0)) / len(self.groups)

    def __eq__(self, other):
        if not isinstance(other, CoverageDb):
            return NotImplemented
        return ((self.test, self.seed, self.transactions) == (other.test, other.seed, other.transactions)
                and list(self.groups.values()) == list(other.groups.values()))

    def __repr__(self):
        return f"CoverageDb(test={self.test!r}, groups={list(self.groups)})"


def _join(a, b):
    return ",".join(p for p in (a, b) if p)


def merge(db1, db2):
    """Sum hit counts of same-named groups; groups unique to one side are copied.

    Same-named groups must have identical shapes.
    """
    out = CoverageDb(_join(db1.test, db2.test), _join(db1.seed, db2.seed),
                     db1.transactions + db2.transactions)
    for g in db1.groups.values():
        out.add_group(copy.deepcopy(g))
    for g in db2.groups.values():
        if g.name in out.groups:
            out.groups[g.name].merge_hits(g)
        else:
            out.add_group(copy.deepcopy(g))
    return out
