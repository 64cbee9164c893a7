"""Component hierarchy, factory and configuration database."""

import logging
import re

from . import context
from .errors import ConfigDbError, FactoryError, UVMError

TOP_NAME = "uvm_test_top"


# --------------------------------------------------------------------------
# Factory
# --------------------------------------------------------------------------

class uvm_factory:
    """Name-keyed registry of every uvm_object subclass, with overrides."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            inst = super().__new__(cls)
            inst.types = {}
            inst.type_overrides = {}
            inst.inst_overrides = []
            cls._instance = inst
        return cls._instance

    def register(self, cls):
        self.types[cls.__name__] = cls

    def clear_overrides(self):
        self.type_overrides.clear()
        self.inst_overrides.clear()

    def set_type_override_by_name(self, original, override):
        self._lookup(override)
        self.type_overrides[original] = override

    def set_type_override_by_type(self, original, override):
        self.set_type_override_by_name(original.__name__, override.__name__)

    def set_inst_override_by_name(self, original, override, path):
        self._lookup(override)
        self.inst_overrides.append((original, override, path))

    def _lookup(self, name):
        try:
            return self.types[name]
        except KeyError:
            raise FactoryError(f"factory has no type named {name!r}") from None

    def _resolve(self, name, path):
        for orig, over, glob in reversed(self.inst_overrides):
            if orig == name and glob_match(glob, path):
                return self._lookup(over)
        seen = set()
        while name in self.type_overrides and name not in seen:
            seen.add(name)
            name = self.type_overrides[name]
        return self._lookup(name)

    def create_component_by_name(self, kind, name, parent=None, *args, **kwargs):
        path = f"{parent.get_full_name()}.{name}" if parent is not None else name
        cls = self._resolve(kind, path)
        if not issubclass(cls, uvm_component):
            raise FactoryError(f"{kind!r} is not a component type")
        return cls(name, parent, *args, **kwargs)

    def create_object_by_name(self, kind, name="", *args, **kwargs):
        cls = self._resolve(kind, name)
        return cls(name, *args, **kwargs)


class uvm_object:
    def __init_subclass__(cls, **kw):
        super().__init_subclass__(**kw)
        uvm_factory().register(cls)

    def __init__(self, name=""):
        self._name = name

    def get_name(self):
        return self._name

    def get_full_name(self):
        return self._name

    def get_type_name(self):
        return type(self).__name__

    @classmethod
    def create(cls, name="", *args, **kwargs):
        return uvm_factory().create_object_by_name(cls.__name__, name, *args, **kwargs)


# --------------------------------------------------------------------------
# ConfigDB
# --------------------------------------------------------------------------

_glob_cache = {}


def glob_match(pattern, path):
    """``*`` matches any substring (dots included); everything else is literal."""
    rx = _glob_cache.get(pattern)
    if rx is None:
        rx = re.compile("^" + ".*".join(re.escape(p) for p in pattern.split("*")) + "$", re.S)
        _glob_cache[pattern] = rx
    return rx.match(path) is not None


class ConfigDb:
    """Insertion-ordered (path-glob, key, value) store; the newest matching entry wins."""

    def __init__(self):
        self.entries = []

    @staticmethod
    def _path(context, inst):
        base = context.get_full_name() if context is not None else ""
        if base and inst:
            return f"{base}.{inst}"
        return base or inst

    def set(self, context, inst_name, key, value):
        if not key:
            raise ConfigDbError("ConfigDB key must be non-empty")
        self.entries.append((self._path(context, inst_name), key, value))

    def get(self, context, inst_name, key, default=...):
        path = self._path(context, inst_name)
        for glob, k, value in reversed(self.entries):
            if k == key and glob_match(glob, path):
                return value
        if default is not ...:
            return default
        known = sorted({k for _, k, _ in self.entries})
        raise ConfigDbError(f"ConfigDB: no {key!r} visible from {path or '<null>'!r} "
                            f"(keys set so far: {known})")

    def exists(self, context, inst_name, key):
        return self.get(context, inst_name, key, None) is not None

    def clear(self):
        self.entries.clear()


# --------------------------------------------------------------------------
# Components
# --------------------------------------------------------------------------

class _ComponentLogger(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        kwargs["extra"] = {"sim_time": context.current().sim.now, "path": self.extra}
        return msg, kwargs


class uvm_component(uvm_object):
    def __init__(self, name, parent=None):
        super().__init__(name)
        if not name or "." in name:
            raise UVMError(f"invalid component name {name!r}")
        self._parent = parent
        self._children = {}
        if parent is not None:
            if name in parent._children:
                raise UVMError(f"{parent.get_full_name()} already has a child named {name!r}")
            parent._children[name] = self
            self._full_name = f"{parent.get_full_name()}.{name}"
        else:
            self._full_name = name
        self._logger = None
        self._rng = None

    @classmethod
    def create(cls, name, parent=None, *args, **kwargs):
        return uvm_factory().create_component_by_name(cls.__name__, name, parent, *args, **kwargs)

    # -- hierarchy --------------------------------------------------------
    def get_full_name(self):
        return self._full_name

    def get_parent(self):
        return self._parent

    def get_children(self):
        return list(self._children.values())

    def get_child(self, name):
        return self._children.get(name)

    def walk(self):
        """Pre-order traversal (self first)."""
        yield self
        for c in list(self._children.values()):
            yield from c.walk()

    # -- phases -----------------------------------------------------------
    def build_phase(self):
        pass

    def connect_phase(self):
        pass

    async def run_phase(self):
        pass

    def check_phase(self):
        pass

    def report_phase(self):
        pass

    def final_phase(self):
        pass

    # -- services ---------------------------------------------------------
    @property
    def logger(self):
        if self._logger is None:
            self._logger = _ComponentLogger(
                logging.getLogger(f"{context.LOG_ROOT}.{self._full_name}"), self._full_name)
        return self._logger

    @property
    def rng(self):
        """Random stream private to this component, derived from the run seed and path."""
        if self._rng is None:
            self._rng = context.current().rng(self._full_name)
        return self._rng

    def raise_objection(self):
        context.current().objection.raise_()

    def drop_objection(self):
        context.current().objection.drop()

    def cdb_set(self, label, value, inst_path="*"):
        context.ConfigDB().set(self, inst_path, label, value)

    def cdb_get(self, label, inst_path=""):
        return context.ConfigDB().get(self, inst_path, label)

    def __repr__(self):
        return f"<{type(self).__name__} {self._full_name}>"


class uvm_test(uvm_component):
    __test__ = False  # keep pytest from collecting Test* subclasses


class uvm_env(uvm_component):
    pass


class uvm_agent(uvm_component):
    pass


class uvm_monitor(uvm_component):
    pass


class uvm_scoreboard(uvm_component):
    pass
