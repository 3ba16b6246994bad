"""Tolerant HTML parsing for news index and article pages.

Built on the stdlib ``html.parser`` so malformed markup degrades to a
best-effort tree instead of an exception. Selectors use a deliberately
small syntax: ``tag``, ``.class``, ``#id``, ``tag.class`` and ``tag#id``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from html.parser import HTMLParser

# Elements that never wrap content.
_VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
}
# Elements whose text is never visible.
INVISIBLE_TAGS = {"script", "style", "head", "noscript", "template"}


@dataclass
class Node:
    tag: str
    attrs: dict[str, str] = field(default_factory=dict)
    children: list["Node | str"] = field(default_factory=list)

    def iter_nodes(self):
        """All element nodes in document order, including self."""
        yield self
        for child in self.children:
            if isinstance(child, Node):
                yield from child.iter_nodes()

    def text(self, skip: frozenset[str] = frozenset(INVISIBLE_TAGS)) -> str:
        """Visible text with whitespace collapsed to single spaces."""
        parts: list[str] = []
        self._collect_text(parts, skip)
        return " ".join("".join(parts).split())

    def _collect_text(self, parts: list[str], skip: frozenset[str]) -> None:
        for child in self.children:
            if isinstance(child, str):
                parts.append(child)
            elif child.tag not in skip:
                child._collect_text(parts, skip)
                parts.append(" ")


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = Node(tag="#document")
        self._stack = [self.root]

    def handle_starttag(self, tag, attrs):
        node = Node(tag=tag, attrs={k: (v or "") for k, v in attrs})
        self._stack[-1].children.append(node)
        if tag not in _VOID_TAGS:
            self._stack.append(node)

    def handle_startendtag(self, tag, attrs):
        self._stack[-1].children.append(Node(tag=tag, attrs={k: (v or "") for k, v in attrs}))

    def handle_endtag(self, tag):
        # Pop to the matching open tag if there is one; ignore strays.
        for i in range(len(self._stack) - 1, 0, -1):
            if self._stack[i].tag == tag:
                del self._stack[i:]
                return

    def handle_data(self, data):
        if data:
            self._stack[-1].children.append(data)


def parse_html(text: str) -> Node:
    """Parse HTML into a Node tree; never raises on malformed input."""
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    return builder.root


@dataclass(frozen=True)
class Selector:
    """``tag``, ``.class``, ``#id``, ``tag.class`` or ``tag#id``."""

    tag: str | None = None
    id: str | None = None
    cls: str | None = None

    @classmethod
    def parse(cls, text: str) -> "Selector":
        text = text.strip()
        for sep, key in ((".", "cls"), ("#", "id")):
            if sep in text:
                tag, _, value = text.partition(sep)
                if not value:
                    raise ValueError(f"selector {text!r} has an empty {key} part")
                return cls(tag=tag or None, **{key: value})
        if not text:
            raise ValueError("empty selector")
        return cls(tag=text)

    def matches(self, node: Node) -> bool:
        if self.tag is not None and node.tag != self.tag:
            return False
        if self.id is not None and node.attrs.get("id") != self.id:
            return False
        if self.cls is not None and self.cls not in node.attrs.get("class", "").split():
            return False
        return True


def find_first(root: Node, selector: Selector) -> Node | None:
    for node in root.iter_nodes():
        if node is not root and selector.matches(node):
            return node
    return None
