# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# seeding - Derives every random seed from the single top-level seed
#
# Part of the fraudens hybrid ensemble fraud detection package
#
# Python Compatibility: Requires Python 3.8 or later
#
# -----------------------------------------------------------------------------
# MIT License - see LICENSE.txt
# -----------------------------------------------------------------------------
# Edit History:
# 17-Oct-26 Initial edit
# -----------------------------------------------------------------------------

import hashlib
from typing import Union

import numpy as np

def derive_seed(seed: int, stage: str, index: Union[int, str] = 0) -> int:
    """Hash a parent seed, a stage name and an index into a child seed.

    Args:
        seed: The parent seed.
        stage: Name of the consumer, e.g. ``"fold"``, ``"tree"``, ``"epoch"``.
        index: Position of the consumer within the stage.

    Returns:
        A non-negative integer below 2**63.

    Note:
        * The derivation is SHA-256 of ``"{seed}:{stage}:{index}"``, so a
          child seed depends only on its own coordinates. Work items can
          therefore run in any order, or in parallel, and still see the
          same random streams.

    """
    digest = hashlib.sha256(f"{int(seed)}:{stage}:{index}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") & 0x7FFFFFFFFFFFFFFF

def make_rng(seed: int, stage: str, index: Union[int, str] = 0) -> np.random.Generator:
    """A numpy Generator seeded with :func:`derive_seed`."""
    return np.random.default_rng(derive_seed(seed, stage, index))
