"""4-state bit vectors (0, 1, X, Z)."""

_CHARS = "01XZ"


class LogicConversionError(ValueError):
    """Raised when an X/Z-containing value is converted to an integer."""


class LogicValue:
    """Immutable fixed-width vector of 0/1/X/Z bits.

    Stored as three integers: the 0/1 bit pattern plus X and Z masks.
    Bits flagged in either mask carry no numeric meaning.
    """

    __slots__ = ("width", "bits", "xmask", "zmask")

    def __init__(self, value=0, width=None, xmask=0, zmask=0):
        if isinstance(value, str):
            lv = LogicValue.from_str(value)
            if width is not None and width != lv.width:
                raise ValueError(f"string {value!r} is {lv.width} bits, expected {width}")
            value, width, xmask, zmask = lv.bits, lv.width, lv.xmask, lv.zmask
        if width is None or width < 1:
            raise ValueError("width must be a positive bit count")
        full = (1 << width) - 1
        if value < 0:
            if value < -(1 << (width - 1)):
                raise ValueError(f"{value} does not fit in {width} bits")
            value &= full
        elif value > full:
            raise ValueError(f"{value:#x} does not fit in {width} bits")
        self.width = width
        self.xmask = xmask & full
        self.zmask = zmask & full & ~self.xmask
        self.bits = value & ~(self.xmask | self.zmask)

    @classmethod
    def from_str(cls, text):
        """Parse MSB-first text such as ``"01XZ"`` (underscores ignored)."""
        text = text.replace("_", "").upper()
        if not text or any(c not in _CHARS for c in text):
            raise ValueError(f"invalid logic string {text!r}")
        bits = xmask = zmask = 0
        for c in text:
            bits <<= 1
            xmask <<= 1
            zmask <<= 1
            if c == "1":
                bits |= 1
            elif c == "X":
                xmask |= 1
            elif c == "Z":
                zmask |= 1
        return cls(bits, len(text), xmask, zmask)

    @classmethod
    def unknown(cls, width):
        return cls(0, width, xmask=(1 << width) - 1)

    @property
    def is_resolvable(self):
        return not (self.xmask or self.zmask)

    @property
    def binstr(self):
        out = []
        for i in reversed(range(self.width)):
            m = 1 << i
            if self.xmask & m:
                out.append("X")
            elif self.zmask & m:
                out.append("Z")
            else:
                out.append("1" if self.bits & m else "0")
        return "".join(out)

    def __int__(self):
        if not self.is_resolvable:
            raise LogicConversionError(f"cannot convert {self.binstr} to int")
        return self.bits

    __index__ = __int__

    @property
    def signed_integer(self):
        v = int(self)
        if v >> (self.width - 1):
            v -= 1 << self.width
        return v

    def __getitem__(self, i):
        if not 0 <= i < self.width:
            raise IndexError(i)
        m = 1 << i
        if self.xmask & m:
            return "X"
        if self.zmask & m:
            return "Z"
        return "1" if self.bits & m else "0"

    def __len__(self):
        return self.width

    def __eq__(self, other):
        if isinstance(other, LogicValue):
            return (self.width, self.bits, self.xmask, self.zmask) == (
                other.width, other.bits, other.xmask, other.zmask)
        if isinstance(other, int):
            return self.is_resolvable and self.bits == other
        if isinstance(other, str):
            return self.binstr == other.upper()
        return NotImplemented

    def __hash__(self):
        return hash((self.width, self.bits, self.xmask, self.zmask))

    def __repr__(self):
        return f"LogicValue('{self.binstr}')"

    def __str__(self):
        return self.binstr
