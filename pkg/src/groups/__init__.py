"""Finite groups, unitary representations, characters and induction."""

from .group import FiniteGroup, Subgroup, load_group, group_from_permutations, group_from_matrices
from .characters import UnitaryRep, CharacterTable, character_table, irreps, irrep_by_label
from .catalog import catalog_group, catalog_names
from .induction import (
    direct_sum, regular_rep, restrict, induce, branching_table, frobenius_check,
    coset_space, normalizer_quotient, extend_rep_minimal, comma_fiber,
)

__all__ = [
    'FiniteGroup', 'Subgroup', 'load_group', 'group_from_permutations', 'group_from_matrices',
    'UnitaryRep', 'CharacterTable', 'character_table', 'irreps', 'irrep_by_label',
    'catalog_group', 'catalog_names',
    'direct_sum', 'regular_rep', 'restrict', 'induce', 'branching_table', 'frobenius_check',
    'coset_space', 'normalizer_quotient', 'extend_rep_minimal', 'comma_fiber',
]
