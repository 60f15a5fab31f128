"""Tokenizer, recursive-descent parser and pretty-printer for ``.far`` rule files.

Grammar::

    ruleset := rule+
    rule    := "rule" IDENT "{" cond+ outcome+ "}"
    cond    := ("when" | "and") VAR "is" TERM
    outcome := "then" EMOTION "intensity" LEVEL

``#`` starts a comment running to the end of the line. Rule weights are
derived from the conditions, never written.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..appraisal import Variable
from ..emotions import Emotion, Intensity, RECOGNIZED_EMOTIONS
from ..errors import RuleSyntaxError
from .model import ANY, RULE_VARIABLES, Condition, Outcome, Rule, RuleSet, rule_vocabulary

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<lbrace>\{)|(?P<rbrace>\})|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "{", "}", "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if m is None:
            raise RuleSyntaxError(f"unexpected character {text[pos]!r}", line, column)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "lbrace":
            tokens.append(Token("{", "{", line, column))
        elif kind == "rbrace":
            tokens.append(Token("}", "}", line, column))
        elif kind == "ident":
            tokens.append(Token("ident", m.group(), line, column))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Token | None = None) -> RuleSyntaxError:
        tok = tok or self.tok
        return RuleSyntaxError(message, tok.line, tok.column)

    def describe(self, tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect_keyword(self, word: str) -> Token:
        if self.tok.kind != "ident" or self.tok.text != word:
            raise self.error(f"expected {word!r}, found {self.describe(self.tok)}")
        return self.advance()

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {kind!r}, found {self.describe(self.tok)}")
        return self.advance()

    def expect_ident(self, what: str) -> Token:
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}, found {self.describe(self.tok)}")
        return self.advance()

    def at_keyword(self, *words: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text in words

    def parse(self) -> RuleSet:
        rules: list[Rule] = []
        names: set[str] = set()
        while self.tok.kind != "eof":
            rules.append(self.parse_rule(names))
        if not rules:
            raise self.error("expected 'rule', found end of input")
        return RuleSet(tuple(rules))

    def parse_rule(self, names: set[str]) -> Rule:
        start = self.expect_keyword("rule")
        name_tok = self.expect_ident("rule name")
        if name_tok.text in names:
            raise self.error(f"duplicate rule name {name_tok.text!r}", name_tok)
        names.add(name_tok.text)
        self.expect("{")

        conditions: dict[Variable, Condition] = {}
        while self.at_keyword("when", "and"):
            self.advance()
            var_tok = self.expect_ident("appraisal variable")
            try:
                variable = Variable(var_tok.text)
            except ValueError:
                variable = None
            if variable not in RULE_VARIABLES:
                raise self.error(f"unknown variable {var_tok.text!r}", var_tok)
            if variable in conditions:
                raise self.error(f"variable {variable.value!r} tested twice in rule {name_tok.text!r}", var_tok)
            self.expect_keyword("is")
            term_tok = self.expect_ident("term")
            if term_tok.text != ANY and term_tok.text not in rule_vocabulary(variable):
                allowed = ", ".join(rule_vocabulary(variable) + (ANY,))
                raise self.error(
                    f"unknown term {term_tok.text!r} for {variable.value} (expected one of {allowed})", term_tok
                )
            conditions[variable] = Condition(variable, term_tok.text)

        if not conditions:
            raise self.error(f"rule {name_tok.text!r} has no conditions")

        outcomes: list[Outcome] = []
        while self.at_keyword("then"):
            self.advance()
            emo_tok = self.expect_ident("emotion")
            try:
                emotion = Emotion(emo_tok.text)
            except ValueError:
                emotion = None
            if emotion not in RECOGNIZED_EMOTIONS:
                raise self.error(f"unknown emotion {emo_tok.text!r}", emo_tok)
            self.expect_keyword("intensity")
            lvl_tok = self.expect_ident("intensity level")
            try:
                intensity = Intensity(lvl_tok.text)
            except ValueError:
                raise self.error(f"unknown intensity {lvl_tok.text!r}", lvl_tok) from None
            outcome = Outcome(emotion, intensity)
            if outcome in outcomes:
                raise self.error(f"outcome repeated in rule {name_tok.text!r}", emo_tok)
            outcomes.append(outcome)

        if not outcomes:
            raise self.error(f"expected 'then', found {self.describe(self.tok)}")
        self.expect("}")

        try:
            return Rule(name_tok.text, tuple(conditions.values()), tuple(outcomes))
        except ValueError as exc:
            raise self.error(str(exc), start) from None


def parse_rules(text: str) -> RuleSet:
    """Parse ``.far`` text into a RuleSet; raises RuleSyntaxError with position info."""
    return _Parser(text).parse()


def format_rule(rule: Rule) -> str:
    lines = [f"rule {rule.name} {{"]
    for i, cond in enumerate(rule.conditions):
        lines.append(f"  {'when' if i == 0 else 'and'} {cond.variable.value} is {cond.term}")
    for out in rule.outcomes:
        lines.append(f"  then {out.emotion.value} intensity {out.intensity.value}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_rules(rs: RuleSet) -> str:
    """Canonical text; rules separated by one blank line, empty set gives ''."""
    return "\n".join(format_rule(r) for r in rs.rules)
