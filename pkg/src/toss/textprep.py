"""Token-stream preprocessing: case splitting, stopword removal, dictionary
splitting, and plural restoration.

All transforms are pure functions over lists of strings. A finished token
stream contains only lowercase ASCII-alphanumeric tokens. The four optional
transforms compose in a fixed order: case split, stopwords, dictionary split,
plural restoration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

TokenStream = list[str]

_BASE_SPLIT = re.compile(r"[^0-9A-Za-z]+")

# Camel-case segmentation. An uppercase run followed by a lowercase letter
# splits before its last uppercase char ("HTTPServer" -> "HTTP", "Server").
_CAMEL = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z0-9]*|[a-z0-9]+")

_MIN_SPLIT_PART = 2  # dictionary splitter never emits single characters


@dataclass(frozen=True)
class PrepConfig:
    """Which of the four preprocessing transforms are enabled.

    sps: split pascal/camel and snake case identifiers
    ds:  delete English stopwords
    rs:  split concatenated words against the bundled lexicon
    pos: restore plural nouns to singular form
    """

    sps: bool = False
    ds: bool = False
    rs: bool = False
    pos: bool = False

    @classmethod
    def all_on(cls) -> "PrepConfig":
        return cls(sps=True, ds=True, rs=True, pos=True)

    @classmethod
    def none(cls) -> "PrepConfig":
        return cls()

    @classmethod
    def from_flags(cls, spec: str) -> "PrepConfig":
        """Parse a comma-separated flag list, e.g. "sps,ds,rs,pos" or "none"."""
        spec = spec.strip().lower()
        if spec in ("", "none"):
            return cls()
        if spec == "all":
            return cls.all_on()
        flags = {}
        for part in spec.split(","):
            part = part.strip()
            if part not in ("sps", "ds", "rs", "pos"):
                raise ValueError(f"unknown preprocessing flag: {part!r}")
            flags[part] = True
        return cls(**flags)

    def to_dict(self) -> dict:
        return {"sps": self.sps, "ds": self.ds, "rs": self.rs, "pos": self.pos}

    @classmethod
    def from_dict(cls, d: dict) -> "PrepConfig":
        return cls(sps=bool(d["sps"]), ds=bool(d["ds"]), rs=bool(d["rs"]), pos=bool(d["pos"]))


def _read_data(name: str) -> str:
    return resources.files("toss.data").joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def stopword_set() -> frozenset[str]:
    return frozenset(w for w in _read_data("stopwords.txt").split() if w)


@lru_cache(maxsize=1)
def lexicon_set() -> frozenset[str]:
    words = []
    for line in _read_data("lexicon.txt").splitlines():
        if line:
            words.append(line.split("\t")[0])
    return frozenset(words)


@lru_cache(maxsize=1)
def irregular_plurals() -> dict[str, str]:
    table = {}
    for line in _read_data("irregular_plurals.txt").splitlines():
        if line:
            plural, singular = line.split("\t")
            table[plural] = singular
    return table


def _raw_split(text: str) -> list[str]:
    """Split on runs of non-alphanumeric characters, preserving case."""
    return [t for t in _BASE_SPLIT.split(text) if t]


def tokenize_base(text: str) -> TokenStream:
    """Split on any non-alphanumeric character, lowercase, drop empties."""
    return [t.lower() for t in _raw_split(text)]


def split_pascal_snake(tokens: list[str]) -> TokenStream:
    """Split each token at case boundaries and lowercase the pieces.

    Underscore splitting already happens in the base tokenizer; this handles
    the camel/pascal boundaries, which means it must run on case-preserved
    tokens to have anything to split.
    """
    out: TokenStream = []
    for tok in tokens:
        out.extend(piece.lower() for piece in _CAMEL.findall(tok))
    return out


def remove_stopwords(tokens: TokenStream) -> TokenStream:
    stop = stopword_set()
    return [t for t in tokens if t not in stop]


def ronin_split(tokens: TokenStream) -> TokenStream:
    """Split concatenated words by greedy longest-match against the lexicon.

    A token splits only if it is fully coverable by lexicon words of length
    >= 2; otherwise it passes through unchanged. A token that is itself a
    lexicon word is its own longest match and never splits.
    """
    lex = lexicon_set()
    out: TokenStream = []
    for tok in tokens:
        parts = _greedy_split(tok, lex)
        if parts is None:
            out.append(tok)
        else:
            out.extend(parts)
    return out


def _greedy_split(token: str, lex: frozenset[str]) -> list[str] | None:
    n = len(token)
    parts: list[str] = []
    i = 0
    while i < n:
        end = None
        for j in range(n, i + _MIN_SPLIT_PART - 1, -1):
            if token[i:j] in lex:
                end = j
                break
        if end is None:
            return None
        parts.append(token[i:end])
        i = end
    return parts if len(parts) > 1 else [token]


def lemmatize(tokens: TokenStream) -> TokenStream:
    """Reduce plural-noun inflections to their base form.

    Rule order per token: irregulars table, then length guard (< 3 chars pass
    through), then -ies -> -y, then -es stripping for sibilant stems, then
    bare -s stripping guarded against -ss/-us/-is endings.
    """
    table = irregular_plurals()
    return [_lemma(t, table) for t in tokens]


_ES_STEM_ENDINGS = ("ss", "us", "x", "z", "ch", "sh")


def _lemma(tok: str, table: dict[str, str]) -> str:
    hit = table.get(tok)
    if hit is not None:
        return hit
    if len(tok) < 3:
        return tok
    if tok.endswith("ies") and len(tok) >= 5:
        return tok[:-3] + "y"
    if tok.endswith("es") and len(tok) >= 5 and tok[:-2].endswith(_ES_STEM_ENDINGS):
        return tok[:-2]
    if tok.endswith("s") and not tok.endswith(("ss", "us", "is")):
        return tok[:-1]
    return tok


def preprocess(text: str, cfg: PrepConfig) -> TokenStream:
    """Apply base tokenization plus the enabled transforms in fixed order.

    Case information must survive until the case splitter has run, so the
    pipeline splits first, case-splits if enabled, then lowercases; the net
    effect for a disabled case splitter equals tokenize_base. When stopword
    removal is enabled the final stream is swept once more, because the
    dictionary splitter and the lemmatizer can both mint stopwords (e.g.
    "showdown" -> "show", "down") and the output must be stable under
    re-preprocessing.
    """
    raw = _raw_split(text)
    if cfg.sps:
        tokens = split_pascal_snake(raw)
    else:
        tokens = [t.lower() for t in raw]
    if cfg.ds:
        tokens = remove_stopwords(tokens)
    if cfg.rs:
        tokens = ronin_split(tokens)
    if cfg.pos:
        tokens = lemmatize(tokens)
    if cfg.ds:
        tokens = remove_stopwords(tokens)
    return tokens
