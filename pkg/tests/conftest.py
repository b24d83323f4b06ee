import random

import pytest

from pstray.alphabet import AlphabetSpec, ingest
from pstray.encoding import STATIC_BASE
from pstray.tray import assemble

# The running example used throughout: pi = {x,y,z}, sigma = {A} (+ '$').
DEMO_TEXT = "zAxAyyxyAxxy"
DEMO_PSA = [6, 7, 11, 5, 10, 3, 8, 1, 12, 4, 9, 2, 13]
DEMO_PLCP = [0, 2, 2, 1, 3, 1, 5, 3, 1, 0, 4, 2, 0]


def make_text(raw, pi="xyz", sigma=None, mode="bytes"):
    """Ingest helper: explicit parameterized set, static set or auto."""
    spec = AlphabetSpec(pi_members=frozenset(pi),
                        sigma_members=None if sigma is None else frozenset(sigma),
                        mode=mode)
    return ingest(raw, spec)


def sym_codes(text, pretty):
    """Encoded-symbol codes from a compact string like '0A014'.

    Digits are distances, other characters static tokens of the text.
    """
    out = []
    for ch in pretty:
        if ch.isdigit():
            out.append(int(ch))
        else:
            out.append(STATIC_BASE + text.tok2id[ch] if ch != "$"
                       else STATIC_BASE + text.sentinel)
    return out


def random_text(rng: random.Random, max_n=120, max_pi=6, max_sigma=3):
    """One random text over fresh alphabets; returns the ingested PText."""
    pi_k = rng.randint(0, max_pi)
    sg_k = rng.randint(0, max_sigma)
    if pi_k + sg_k == 0:
        sg_k = 1
    pis = list("uvwxyz")[:pi_k]
    sgs = list("ABCD")[:sg_k]
    n = rng.randint(1, max_n)
    raw = "".join(rng.choice(pis + sgs) for _ in range(n))
    return make_text(raw, pi=pis)


def random_pattern(rng: random.Random, text, max_m=14):
    """Half window-with-renaming, half random over the text's tokens."""
    tokens = sorted(text.tok2id)
    pi_toks = sorted(t for t in tokens if text.spec.is_parameterized(t))
    if rng.random() < 0.5 and text.n > 2:
        m = rng.randint(1, min(max_m, text.n - 1))
        start = rng.randint(1, text.n - m)
        window = [text.id2tok[c] for c in text.symbols[start - 1:start - 1 + m]]
        shuffled = pi_toks[:]
        rng.shuffle(shuffled)
        renaming = dict(zip(pi_toks, shuffled))
        return "".join(renaming.get(c, c) for c in window)
    m = rng.randint(1, max_m)
    return "".join(rng.choice(tokens) for _ in range(m))


@pytest.fixture(scope="session")
def demo_text():
    return make_text(DEMO_TEXT, pi="xyz", sigma="A")


@pytest.fixture(scope="session")
def demo_index(demo_text):
    return assemble(demo_text)
