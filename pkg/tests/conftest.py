import random

import pytest

from vomm import Alphabet, Sequence


@pytest.fixture
def abcdr() -> Alphabet:
    return Alphabet("abcdr")


@pytest.fixture
def abra(abcdr) -> Sequence:
    return Sequence.of_text(abcdr, "abracadabra")


def text_seq(text: str, alphabet: Alphabet | None = None) -> Sequence:
    if alphabet is None:
        alphabet = Alphabet(sorted(set(text)))
    return Sequence.of_text(alphabet, text)


def random_instance(rng: random.Random, k: int, train_len: int, ctx_len: int):
    """A random (training sequence, context sequence) pair over k symbols."""
    alphabet = Alphabet(range(k))
    train = Sequence(alphabet, [rng.randrange(k) for _ in range(train_len)])
    ctx = Sequence(alphabet, [rng.randrange(k) for _ in range(ctx_len)])
    return train, ctx
