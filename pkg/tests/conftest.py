import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")
GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def corpus_path(name: str) -> str:
    return os.path.join(CORPUS, name)


def golden_path(name: str) -> str:
    return os.path.join(GOLDEN, name)


@pytest.fixture
def corpus():
    return corpus_path


def check_file(name: str, **kw):
    from dholc.driver import Options, elaborate_file

    return elaborate_file(corpus_path(name), Options(**kw))


def goal_eq(chk, elaborated, surface_text_or_term):
    """Alpha/beta comparison of an elaborated term against a surface
    formula (text or AST) whose constant names still parse as Vars."""
    from dholc.parser import parse_term_string
    from dholc.syntax import alpha_beta_eq, resolve_constants

    expected = surface_text_or_term
    if isinstance(expected, str):
        expected = parse_term_string(expected)
    expected = resolve_constants(expected, chk.sig.consts.keys())
    return alpha_beta_eq(elaborated, expected)
