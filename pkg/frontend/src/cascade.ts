/** CSS-subset stylesheet parser and cascade, matching the server's.
 *
 * The snapshot endpoint ships the session stylesheet as text; the client
 * re-parses it here and must resolve every (element, classes, clicked)
 * combination to the same computed style the server would. The shared
 * fixture `cascade_conformance.json` pins that agreement case by case.
 *
 * Grammar: `selector { property: value; ... }`, selector is
 * element[.class]*[:pseudo] with element in {graph, node, edge} and the
 * single pseudo-class `clicked`. Comments are C-style. Parsing is
 * all-or-nothing: the first problem throws a positioned error.
 */

export const ELEMENTS = ["graph", "node", "edge"] as const;
export type ElementName = (typeof ELEMENTS)[number];

const PSEUDO_CLASSES = ["clicked"] as const;
const SHAPES = ["circle", "box", "icon"] as const;

const COLOR_PROPERTIES = new Set(["fill-color", "stroke-color", "background"]);
const SIZE_PROPERTIES = new Set(["size", "stroke-width"]);
const PROPERTIES = new Set([
  "fill-color", "size", "shape", "icon",
  "stroke-color", "stroke-width", "label-visible", "background",
]);

export type DeclValue = string | number | boolean;

export interface ComputedStyle {
  "fill-color": string;
  size: number;
  shape: string;
  icon: string | null;
  "stroke-color": string;
  "stroke-width": number;
  "label-visible": boolean;
  background: string;
}

export function defaultStyle(): ComputedStyle {
  return {
    "fill-color": "#CCCCCC",
    size: 10,
    shape: "circle",
    icon: null,
    "stroke-color": "#000000",
    "stroke-width": 1,
    "label-visible": false,
    background: "#FFFFFF",
  };
}

export class StyleParseError extends Error {
  constructor(
    readonly line: number,
    readonly col: number,
    readonly detail: string,
  ) {
    super(`line ${line}, col ${col}: ${detail}`);
    this.name = "StyleParseError";
  }
}

export interface Selector {
  element: ElementName;
  classes: readonly string[];
  pseudo: string | null;
}

export interface StyleRule {
  selector: Selector;
  declarations: ReadonlyArray<readonly [string, DeclValue]>;
  sourceOrder: number;
}

export function selectorText(selector: Selector): string {
  let text = selector.element + selector.classes.map((c) => `.${c}`).join("");
  if (selector.pseudo) {
    text += `:${selector.pseudo}`;
  }
  return text;
}

function selectorMatches(
  selector: Selector,
  element: string,
  classes: readonly string[],
  clicked: boolean,
): boolean {
  if (selector.element !== element) {
    return false;
  }
  if (!selector.classes.every((c) => classes.includes(c))) {
    return false;
  }
  if (selector.pseudo !== null && !clicked) {
    return false;
  }
  return true;
}

// --- tokenizer ---------------------------------------------------------------

type TokenKind =
  | "IDENT" | "COLOR" | "DIMENSION"
  | "DOT" | "COLON" | "SEMI" | "LBRACE" | "RBRACE" | "EOF";

interface Token {
  kind: TokenKind;
  value: string;
  // DIMENSION carries the numeric part here; 0 otherwise.
  number: number;
  line: number;
  col: number;
}

function describe(token: Token): string {
  if (token.kind === "EOF") {
    return "end of input";
  }
  if (token.kind === "COLOR") {
    return `'#${token.value}'`;
  }
  if (token.kind === "DIMENSION") {
    return `'${token.number}${token.value}'`;
  }
  return `'${token.value}'`;
}

const HEX_DIGIT = /[0-9a-fA-F]/;
const DIGIT = /[0-9]/;
const IDENT_START = /[a-z]/;
const IDENT_CONT = /[a-z0-9-]/;
const SUFFIX_CHAR = /[a-zA-Z%]/;

function tokenize(text: string): Token[] {
  const tokens: Token[] = [];
  let i = 0;
  let line = 1;
  let col = 1;
  const n = text.length;

  const push = (kind: TokenKind, value: string, number: number, atLine: number, atCol: number) =>
    tokens.push({ kind, value, number, line: atLine, col: atCol });

  const advanceOver = (chunk: string) => {
    const lastNewline = chunk.lastIndexOf("\n");
    if (lastNewline !== -1) {
      for (const ch of chunk) {
        if (ch === "\n") {
          line += 1;
        }
      }
      col = chunk.length - lastNewline;
    } else {
      col += chunk.length;
    }
  };

  while (i < n) {
    const ch = text[i] as string;
    if (ch === "\n") {
      line += 1;
      col = 1;
      i += 1;
      continue;
    }
    if (ch === " " || ch === "\t" || ch === "\r") {
      col += 1;
      i += 1;
      continue;
    }
    if (text.startsWith("/*", i)) {
      const end = text.indexOf("*/", i + 2);
      if (end === -1) {
        throw new StyleParseError(line, col, "unterminated comment (expected '*/')");
      }
      const chunk = text.slice(i, end + 2);
      advanceOver(chunk);
      i = end + 2;
      continue;
    }
    const startLine = line;
    const startCol = col;
    if (ch === "#") {
      let j = i + 1;
      while (j < n && HEX_DIGIT.test(text[j] as string)) {
        j += 1;
      }
      const digits = text.slice(i + 1, j);
      if (digits.length !== 6) {
        throw new StyleParseError(startLine, startCol,
          "expected a 6-digit hex color like #RRGGBB");
      }
      push("COLOR", digits.toUpperCase(), 0, startLine, startCol);
      advanceOver(text.slice(i, j));
      i = j;
      continue;
    }
    if (DIGIT.test(ch)) {
      let j = i;
      while (j < n && DIGIT.test(text[j] as string)) {
        j += 1;
      }
      const number = parseInt(text.slice(i, j), 10);
      let k = j;
      while (k < n && SUFFIX_CHAR.test(text[k] as string)) {
        k += 1;
      }
      push("DIMENSION", text.slice(j, k), number, startLine, startCol);
      advanceOver(text.slice(i, k));
      i = k;
      continue;
    }
    if (IDENT_START.test(ch)) {
      let j = i;
      while (j < n && IDENT_CONT.test(text[j] as string)) {
        j += 1;
      }
      push("IDENT", text.slice(i, j), 0, startLine, startCol);
      advanceOver(text.slice(i, j));
      i = j;
      continue;
    }
    const simple: Record<string, TokenKind> = {
      ".": "DOT", ":": "COLON", ";": "SEMI", "{": "LBRACE", "}": "RBRACE",
    };
    const kind = simple[ch];
    if (kind) {
      push(kind, ch, 0, startLine, startCol);
      col += 1;
      i += 1;
      continue;
    }
    throw new StyleParseError(startLine, startCol, `unexpected character '${ch}'`);
  }

  push("EOF", "", 0, line, col);
  return tokens;
}

// --- parser ------------------------------------------------------------------

class Parser {
  private pos = 0;

  constructor(private readonly tokens: Token[]) {}

  private peek(): Token {
    return this.tokens[this.pos] as Token;
  }

  private take(): Token {
    const token = this.tokens[this.pos] as Token;
    this.pos += 1;
    return token;
  }

  private fail(token: Token, expected: string): never {
    throw new StyleParseError(token.line, token.col,
      `expected ${expected}, found ${describe(token)}`);
  }

  parse(): StyleRule[] {
    const rules: StyleRule[] = [];
    while (this.peek().kind !== "EOF") {
      rules.push(this.rule(rules.length));
    }
    return rules;
  }

  private rule(sourceOrder: number): StyleRule {
    const selector = this.selector();
    const brace = this.take();
    if (brace.kind !== "LBRACE") {
      this.fail(brace, "'{'");
    }
    // Duplicate property: last value wins, first position kept — Map.set
    // has exactly those semantics.
    const declarations = new Map<string, DeclValue>();
    for (;;) {
      const token = this.peek();
      if (token.kind === "RBRACE") {
        this.take();
        break;
      }
      if (token.kind === "IDENT") {
        const [prop, value] = this.declaration(selector);
        declarations.set(prop, value);
        continue;
      }
      this.fail(token, "a property name or '}'");
    }
    return { selector, declarations: [...declarations.entries()], sourceOrder };
  }

  private selector(): Selector {
    const token = this.take();
    if (token.kind !== "IDENT" || !(ELEMENTS as readonly string[]).includes(token.value)) {
      this.fail(token, "an element keyword (graph, node, or edge)");
    }
    const classes: string[] = [];
    let pseudo: string | null = null;
    for (;;) {
      const next = this.peek();
      if (next.kind === "DOT") {
        this.take();
        const name = this.take();
        if (name.kind !== "IDENT") {
          this.fail(name, "a class name after '.'");
        }
        if (!classes.includes(name.value)) {
          classes.push(name.value);
        }
        continue;
      }
      if (next.kind === "COLON") {
        this.take();
        const name = this.take();
        if (name.kind !== "IDENT" || !(PSEUDO_CLASSES as readonly string[]).includes(name.value)) {
          this.fail(name, "the pseudo-class 'clicked'");
        }
        pseudo = name.value;
        break;
      }
      break;
    }
    return { element: token.value as ElementName, classes, pseudo };
  }

  private declaration(selector: Selector): [string, DeclValue] {
    const propToken = this.take();
    const prop = propToken.value;
    if (!PROPERTIES.has(prop)) {
      throw new StyleParseError(propToken.line, propToken.col,
        `unknown property '${prop}'`);
    }
    if (prop === "background" && selector.element !== "graph") {
      throw new StyleParseError(propToken.line, propToken.col,
        "property 'background' applies only to graph rules");
    }
    const colon = this.take();
    if (colon.kind !== "COLON") {
      this.fail(colon, "':' after the property name");
    }
    const value = this.value(prop);
    const semi = this.take();
    if (semi.kind !== "SEMI") {
      this.fail(semi, "';' after the declaration");
    }
    return [prop, value];
  }

  private value(prop: string): DeclValue {
    const token = this.take();
    if (COLOR_PROPERTIES.has(prop)) {
      if (token.kind !== "COLOR") {
        this.fail(token, "a color value like #RRGGBB");
      }
      return "#" + token.value;
    }
    if (SIZE_PROPERTIES.has(prop)) {
      if (token.kind !== "DIMENSION" || token.value !== "px") {
        this.fail(token, "a pixel size like 12px");
      }
      return token.number;
    }
    if (prop === "shape") {
      if (token.kind !== "IDENT" || !(SHAPES as readonly string[]).includes(token.value)) {
        this.fail(token, "one of circle, box, icon");
      }
      return token.value;
    }
    if (prop === "label-visible") {
      if (token.kind !== "IDENT" || (token.value !== "true" && token.value !== "false")) {
        this.fail(token, "'true' or 'false'");
      }
      return token.value === "true";
    }
    // icon
    if (token.kind !== "IDENT") {
      this.fail(token, "an icon name");
    }
    return token.value;
  }
}

export function parseStylesheet(text: string): StyleRule[] {
  return new Parser(tokenize(text)).parse();
}

export function printStylesheet(rules: StyleRule[]): string {
  const lines = rules.map((rule) => {
    const decls = rule.declarations
      .map(([prop, value]) => `${prop}: ${printValue(value)};`)
      .join(" ");
    const body = decls ? ` ${decls} ` : " ";
    return `${selectorText(rule.selector)} {${body}}`;
  });
  return lines.length ? lines.join("\n") + "\n" : "";
}

function printValue(value: DeclValue): string {
  if (typeof value === "boolean") {
    return value ? "true" : "false";
  }
  if (typeof value === "number") {
    return `${value}px`;
  }
  return value;
}

export function resolveStyle(
  rules: StyleRule[],
  element: ElementName,
  classes: readonly string[] = [],
  clicked = false,
): ComputedStyle {
  const matching = rules.filter((r) => selectorMatches(r.selector, element, classes, clicked));
  matching.sort((a, b) =>
    (a.selector.pseudo ? 1 : 0) - (b.selector.pseudo ? 1 : 0)
    || a.selector.classes.length - b.selector.classes.length
    || a.sourceOrder - b.sourceOrder);
  const resolved = defaultStyle();
  for (const rule of matching) {
    for (const [prop, value] of rule.declarations) {
      (resolved as unknown as Record<string, DeclValue | null>)[prop] = value;
    }
  }
  return resolved;
}
