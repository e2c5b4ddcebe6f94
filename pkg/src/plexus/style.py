"""CSS-subset stylesheets for graph appearance.

Grammar: `selector { property: value; ... }` where selector is
element[.class]*[:pseudo], element in {graph, node, edge}, pseudo in
{clicked}. Comments /* ... */ are allowed anywhere whitespace is. Parsing is
all-or-nothing: the first problem raises a positioned error (1-based line
and column) describing the expected token.

Cascade: built-in defaults, then every matching rule in ascending
(pseudo-matched, class-count, source-order). A rule matches when its element
equals the target's, its classes are a subset of the target's, and its
pseudo (if any) is active.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Optional, Union

ELEMENTS = ("graph", "node", "edge")
PSEUDO_CLASSES = ("clicked",)
SHAPES = ("circle", "box", "icon")

COLOR_PROPERTIES = ("fill-color", "stroke-color", "background")
SIZE_PROPERTIES = ("size", "stroke-width")
PROPERTIES = (
    "fill-color", "size", "shape", "icon",
    "stroke-color", "stroke-width", "label-visible", "background",
)

DeclValue = Union[str, int, bool]


class StyleError(Exception):
    pass


class StyleParseError(StyleError):
    """Positioned parse failure; message says what was expected."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class UnknownPropertyError(StyleParseError):
    def __init__(self, line: int, col: int, property_name: str, message: str):
        super().__init__(line, col, message)
        self.property_name = property_name


@dataclass(frozen=True)
class Selector:
    element: str
    classes: tuple[str, ...] = ()
    pseudo: Optional[str] = None

    def specificity(self) -> tuple[int, int, int]:
        return (1 if self.pseudo else 0, len(self.classes), 1)

    def matches(self, element: str, classes, clicked: bool) -> bool:
        if self.element != element:
            return False
        if not set(self.classes) <= set(classes):
            return False
        if self.pseudo is not None and not clicked:
            return False
        return True

    def __str__(self) -> str:
        text = self.element + "".join(f".{c}" for c in self.classes)
        if self.pseudo:
            text += f":{self.pseudo}"
        return text


@dataclass(frozen=True)
class StyleRule:
    selector: Selector
    declarations: tuple[tuple[str, DeclValue], ...]
    source_order: int


@dataclass(frozen=True)
class ComputedStyle:
    fill_color: str = "#CCCCCC"
    size: int = 10
    shape: str = "circle"
    icon: Optional[str] = None
    stroke_color: str = "#000000"
    stroke_width: int = 1
    label_visible: bool = False
    background: str = "#FFFFFF"

    def as_dict(self) -> dict[str, Any]:
        return {
            "fill-color": self.fill_color,
            "size": self.size,
            "shape": self.shape,
            "icon": self.icon,
            "stroke-color": self.stroke_color,
            "stroke-width": self.stroke_width,
            "label-visible": self.label_visible,
            "background": self.background,
        }


_FIELD_BY_PROPERTY = {
    "fill-color": "fill_color",
    "size": "size",
    "shape": "shape",
    "icon": "icon",
    "stroke-color": "stroke_color",
    "stroke-width": "stroke_width",
    "label-visible": "label_visible",
    "background": "background",
}


# --- tokenizer ---------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT COLOR DIMENSION DOT COLON SEMI LBRACE RBRACE EOF
    value: Any
    line: int
    col: int

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        if self.kind == "IDENT":
            return f"'{self.value}'"
        if self.kind == "COLOR":
            return f"'#{self.value}'"
        if self.kind == "DIMENSION":
            return f"'{self.value[0]}{self.value[1]}'"
        return f"'{self.value}'"


_HEX_DIGITS = set("0123456789abcdefABCDEF")


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance_over(chunk: str):
        nonlocal line, col
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            col += 1
            i += 1
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end == -1:
                raise StyleParseError(line, col, "unterminated comment (expected '*/')")
            chunk = text[i:end + 2]
            advance_over(chunk)
            i = end + 2
            continue
        start_line, start_col = line, col
        if ch == "#":
            j = i + 1
            while j < n and text[j] in _HEX_DIGITS:
                j += 1
            digits = text[i + 1:j]
            if len(digits) != 6:
                raise StyleParseError(start_line, start_col,
                                      "expected a 6-digit hex color like #RRGGBB")
            tokens.append(_Token("COLOR", digits.upper(), start_line, start_col))
            advance_over(text[i:j])
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            number = int(text[i:j])
            k = j
            while k < n and (text[k].isalpha() or text[k] == "%"):
                k += 1
            suffix = text[j:k]
            tokens.append(_Token("DIMENSION", (number, suffix), start_line, start_col))
            advance_over(text[i:k])
            i = k
            continue
        if "a" <= ch <= "z":
            j = i
            while j < n and (("a" <= text[j] <= "z") or text[j].isdigit() or text[j] == "-"):
                j += 1
            tokens.append(_Token("IDENT", text[i:j], start_line, start_col))
            advance_over(text[i:j])
            i = j
            continue
        simple = {".": "DOT", ":": "COLON", ";": "SEMI", "{": "LBRACE", "}": "RBRACE"}
        if ch in simple:
            tokens.append(_Token(simple[ch], ch, start_line, start_col))
            col += 1
            i += 1
            continue
        raise StyleParseError(start_line, start_col, f"unexpected character {ch!r}")

    tokens.append(_Token("EOF", None, line, col))
    return tokens


# --- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, token: _Token, expected: str):
        raise StyleParseError(token.line, token.col,
                              f"expected {expected}, found {token.describe()}")

    def parse(self) -> list[StyleRule]:
        rules = []
        while self.peek().kind != "EOF":
            rules.append(self.rule(len(rules)))
        return rules

    def rule(self, source_order: int) -> StyleRule:
        selector = self.selector()
        brace = self.take()
        if brace.kind != "LBRACE":
            self.fail(brace, "'{'")
        declarations: dict[str, DeclValue] = {}
        while True:
            token = self.peek()
            if token.kind == "RBRACE":
                self.take()
                break
            if token.kind == "IDENT":
                prop, value = self.declaration(selector)
                declarations[prop] = value  # duplicate property: last one wins
                continue
            self.fail(token, "a property name or '}'")
        return StyleRule(selector, tuple(declarations.items()), source_order)

    def selector(self) -> Selector:
        token = self.take()
        if token.kind != "IDENT" or token.value not in ELEMENTS:
            self.fail(token, "an element keyword (graph, node, or edge)")
        classes: list[str] = []
        pseudo = None
        while True:
            nxt = self.peek()
            if nxt.kind == "DOT":
                self.take()
                name = self.take()
                if name.kind != "IDENT":
                    self.fail(name, "a class name after '.'")
                if name.value not in classes:
                    classes.append(name.value)
                continue
            if nxt.kind == "COLON":
                self.take()
                name = self.take()
                if name.kind != "IDENT" or name.value not in PSEUDO_CLASSES:
                    self.fail(name, "the pseudo-class 'clicked'")
                pseudo = name.value
                break
            break
        return Selector(token.value, tuple(classes), pseudo)

    def declaration(self, selector: Selector) -> tuple[str, DeclValue]:
        prop_token = self.take()
        prop = prop_token.value
        if prop not in PROPERTIES:
            raise UnknownPropertyError(
                prop_token.line, prop_token.col, prop,
                f"unknown property '{prop}'")
        if prop == "background" and selector.element != "graph":
            raise UnknownPropertyError(
                prop_token.line, prop_token.col, prop,
                "property 'background' applies only to graph rules")
        colon = self.take()
        if colon.kind != "COLON":
            self.fail(colon, "':' after the property name")
        value = self.value(prop)
        semi = self.take()
        if semi.kind != "SEMI":
            self.fail(semi, "';' after the declaration")
        return prop, value

    def value(self, prop: str) -> DeclValue:
        token = self.take()
        if prop in COLOR_PROPERTIES:
            if token.kind != "COLOR":
                self.fail(token, "a color value like #RRGGBB")
            return "#" + token.value
        if prop in SIZE_PROPERTIES:
            if token.kind != "DIMENSION" or token.value[1] != "px":
                self.fail(token, "a pixel size like 12px")
            return token.value[0]
        if prop == "shape":
            if token.kind != "IDENT" or token.value not in SHAPES:
                self.fail(token, "one of circle, box, icon")
            return token.value
        if prop == "label-visible":
            if token.kind != "IDENT" or token.value not in ("true", "false"):
                self.fail(token, "'true' or 'false'")
            return token.value == "true"
        if prop == "icon":
            if token.kind != "IDENT":
                self.fail(token, "an icon name")
            return token.value
        raise StyleError(f"unhandled property {prop!r}")  # pragma: no cover


def parse_stylesheet(text: str) -> list[StyleRule]:
    return _Parser(_tokenize(text)).parse()


def print_stylesheet(rules: list[StyleRule]) -> str:
    """Canonical one-rule-per-line serialization; parse(print(rules)) == rules."""
    lines = []
    for rule in rules:
        decls = " ".join(
            f"{prop}: {_print_value(value)};" for prop, value in rule.declarations
        )
        body = f" {decls} " if decls else " "
        lines.append(f"{rule.selector} {{{body}}}")
    return "\n".join(lines) + ("\n" if lines else "")


def _print_value(value: DeclValue) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return f"{value}px"
    return value


def resolve_style(rules: list[StyleRule], element: str, classes=(), clicked: bool = False) -> ComputedStyle:
    """Cascade resolution over built-in defaults."""
    if element not in ELEMENTS:
        raise StyleError(f"unknown element {element!r}")
    matching = [r for r in rules if r.selector.matches(element, classes, clicked)]
    matching.sort(key=lambda r: (*r.selector.specificity(), r.source_order))
    resolved = ComputedStyle()
    for rule in matching:
        updates = {_FIELD_BY_PROPERTY[prop]: value for prop, value in rule.declarations}
        resolved = replace(resolved, **updates)
    return resolved


DEFAULT_THEME_CSS = """\
/* built-in look: two boxed topic hubs, emoji emotion hubs, dot leaves */
graph { background: #FFFFFF; }
node { shape: circle; size: 8px; fill-color: #868E96; stroke-color: #343A40; stroke-width: 1px; label-visible: false; }
edge { stroke-color: #ADB5BD; stroke-width: 1px; }
node.topic { shape: box; size: 46px; fill-color: #343A40; stroke-color: #212529; label-visible: true; }
node.hub { shape: icon; size: 30px; label-visible: true; }
node.hub.anger { icon: emoji-anger; }
node.hub.disgust { icon: emoji-disgust; }
node.hub.fear { icon: emoji-fear; }
node.hub.joy { icon: emoji-joy; }
node.hub.sadness { icon: emoji-sadness; }
node.anger { fill-color: #E03131; }
node.disgust { fill-color: #2F9E44; }
node.fear { fill-color: #7048E8; }
node.joy { fill-color: #FFD700; }
node.sadness { fill-color: #1971C2; }
node:clicked { stroke-color: #111111; stroke-width: 4px; }
"""

THEME_COLORS = {
    "anger": "#E03131",
    "disgust": "#2F9E44",
    "fear": "#7048E8",
    "joy": "#FFD700",
    "sadness": "#1971C2",
}


def default_theme() -> list[StyleRule]:
    return parse_stylesheet(DEFAULT_THEME_CSS)


def load_stylesheet_file(path: str) -> list[StyleRule]:
    with open(path, encoding="utf-8") as handle:
        return parse_stylesheet(handle.read())
