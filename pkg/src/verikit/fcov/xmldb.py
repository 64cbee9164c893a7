"""XML coverage database read/write.

Layout::

    <coverage_db test=".." seed=".." transactions="..">
      <covergroup name=".." coverage="95.00">
        <coverpoint name=".." coverage="..">
          <bin name=".." kind="range" lo=".." hi=".." hits=".." goal=".."/>
        </coverpoint>
        <cross name=".." coverage=".." points="a|b">
          <bin tuple="0|1" hits=".."/>
        </cross>
      </covergroup>
    </coverage_db>

``set`` bins carry an extra ``values`` attribute.  ``coverage`` attributes
are informational and recomputed on read.
"""

import io
import xml.sax
import xml.sax.handler
from xml.etree import ElementTree as ET

from .model import Bin, CoverageDb, CoverageError, Covergroup, Coverpoint, Cross, percent


class CoverageDbError(CoverageError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def to_element(db):
    root = ET.Element("coverage_db", test=db.test, seed=db.seed,
                      transactions=str(db.transactions))
    for g in db.groups.values():
        ge = ET.SubElement(root, "covergroup", name=g.name, coverage=percent(g.coverage))
        for cp in g.coverpoints.values():
            ce = ET.SubElement(ge, "coverpoint", name=cp.name, coverage=percent(cp.coverage))
            for b in cp.bins:
                attrs = dict(name=b.name, kind=b.kind, lo=str(b.lo), hi=str(b.hi),
                             hits=str(b.hits), goal=str(b.goal))
                if b.kind == "set":
                    attrs["values"] = ",".join(str(v) for v in sorted(b.values))
                ET.SubElement(ce, "bin", attrs)
        for cr in g.crosses.values():
            xe = ET.SubElement(ge, "cross", name=cr.name, coverage=percent(cr.coverage),
                               points="|".join(cr.point_names))
            if cr.goal != 1:
                xe.set("goal", str(cr.goal))
            for tup, hits in cr.bins():
                ET.SubElement(xe, "bin", tuple=tup, hits=str(hits))
    return root


def to_xml(db):
    root = to_element(db)
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def write_coverage_db(db, path):
    text = to_xml(db)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


class _Node:
    __slots__ = ("tag", "attrs", "line", "children")

    def __init__(self, tag, attrs, line):
        self.tag = tag
        self.attrs = attrs
        self.line = line
        self.children = []

    def get(self, key, conv=str):
        try:
            raw = self.attrs[key]
        except KeyError:
            raise CoverageDbError(f"<{self.tag}> missing attribute {key!r}", self.line) from None
        try:
            return conv(raw)
        except ValueError:
            raise CoverageDbError(f"<{self.tag}> attribute {key}={raw!r} is not valid", self.line) from None


class _TreeHandler(xml.sax.handler.ContentHandler):
    def __init__(self):
        super().__init__()
        self.stack = []
        self.root = None
        self._locator = None

    def setDocumentLocator(self, locator):
        self._locator = locator

    def startElement(self, name, attrs):
        node = _Node(name, dict(attrs), self._locator.getLineNumber() if self._locator else None)
        if self.stack:
            self.stack[-1].children.append(node)
        else:
            self.root = node
        self.stack.append(node)

    def endElement(self, name):
        self.stack.pop()


def _parse_tree(text):
    handler = _TreeHandler()
    parser = xml.sax.make_parser()
    parser.setFeature(xml.sax.handler.feature_external_ges, False)
    parser.setContentHandler(handler)
    try:
        parser.parse(io.StringIO(text))
    except xml.sax.SAXParseException as e:
        raise CoverageDbError(f"malformed XML: {e.getMessage()}", e.getLineNumber()) from None
    return handler.root


def _expect(node, tag):
    if node.tag != tag:
        raise CoverageDbError(f"expected <{tag}>, found <{node.tag}>", node.line)


def _read_bin(node):
    _expect(node, "bin")
    kind = node.get("kind")
    name = node.get("name")
    goal, hits = node.get("goal", int), node.get("hits", int)
    try:
        if kind == "set":
            values = [int(v) for v in node.get("values").split(",")]
            b = Bin.set(values, name=name, goal=goal)
            b.hits = hits
            return b
        b = Bin(name, kind, node.get("lo", int), node.get("hi", int), goal=goal, hits=hits)
    except CoverageError as e:
        if isinstance(e, CoverageDbError):
            raise
        raise CoverageDbError(str(e), node.line) from None
    return b


def from_xml(text):
    root = _parse_tree(text)
    _expect(root, "coverage_db")
    db = CoverageDb(root.get("test"), root.get("seed"), root.get("transactions", int))
    for gnode in root.children:
        _expect(gnode, "covergroup")
        group = Covergroup(gnode.get("name"))
        try:
            for node in gnode.children:
                if node.tag == "coverpoint":
                    cp = Coverpoint(node.get("name"), [_read_bin(b) for b in node.children])
                    group.add_coverpoint(cp)
                elif node.tag == "cross":
                    names = node.get("points").split("|")
                    missing = [n for n in names if n not in group.coverpoints]
                    if missing:
                        raise CoverageDbError(f"cross refers to unknown coverpoint(s) {missing}", node.line)
                    cr = Cross(node.get("name"), [group.coverpoints[n] for n in names],
                               goal=int(node.attrs.get("goal", 1)))
                    by_name = {cr.tuple_name(k): k for k in cr.hits}
                    for bnode in node.children:
                        _expect(bnode, "bin")
                        tup = bnode.get("tuple")
                        if tup not in by_name:
                            raise CoverageDbError(f"unknown cross tuple {tup!r}", bnode.line)
                        cr.hits[by_name[tup]] = bnode.get("hits", int)
                    group.add_cross(cr)
                else:
                    raise CoverageDbError(f"unexpected <{node.tag}> in covergroup", node.line)
        except CoverageDbError:
            raise
        except CoverageError as e:
            raise CoverageDbError(str(e), gnode.line) from None
        db.add_group(group)
    return db


def read_coverage_db(path):
    with open(path, encoding="utf-8") as f:
        return from_xml(f.read())
