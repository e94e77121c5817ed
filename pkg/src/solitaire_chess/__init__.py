"""Solitaire Chess: capture-only puzzles on an unbounded board, a solver,
the 3-SAT reduction, and mechanical checks of the reduction's claims."""

from .engine import (
    BoardState, Bounds, Color, IllegalMove, Move, PieceKind, Position, Witness,
    apply_move, attacks, canonical_key, is_legal, is_solved, legal_moves, replay,
    square_color, validate_witness,
)
from .formats import (
    CnfInstance, FormatError, Lit, emit_dimacs, emit_puzzle, normalize, parse_assignment,
    parse_dimacs, parse_puzzle, witness_from_json, witness_to_json,
)
from .reducer import (
    Mode, ReductionError, ReductionLayout, Role, SynthesisError, extract_assignment,
    layout_summary, piece_count, reduce, synthesize_witness,
)
from .solver import ResourceExceeded, Solvable, SolverConfig, Unsolvable, count_solutions, solve
from .verifier import (
    CheckReport, brute_force_sat, check_bishop_isolation, check_color_separation, check_layout,
    check_rook_capture_requirement, check_rook_confinement, forward_check, recheck, round_trip,
)

__version__ = "0.1.0"
