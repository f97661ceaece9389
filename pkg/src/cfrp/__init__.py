"""Counterfactual regret minimization over winning-pattern abstractions in
two-player Mahjong."""

from .abstraction import Features, decode, encode, extract_features, info_set_key
from .cfr import (CFRNode, NodeStore, average_strategy, cfr_iteration, regret_match,
                  rm_normal_form, train)
from .engine import apply, legal_actions, new_game, playout, terminal_utility
from .patterns import Pattern, acceptance_count, evaluate_win, shanten
from .policy import choose_action, fixed_pattern_agent
from .tiles import Deal, complexity_bounds, deal_initial, shuffle_deal

__version__ = "0.1.0"
