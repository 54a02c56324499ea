"""Gadget builders, their certificates, and the full assembly."""
from .assembly import GksAssembly, assemble_gks, default_alphabets, gks_verdicts, symmetry_closure
from .certs import CertificationFailed, GadgetCertificate, GadgetUnavailable, inputs_hash
from .lip import (Forbid11Gadget, LipBGadget, SynthesisFailed, build_lip_a, build_lip_b,
                  certify_forbid11, lip_a_vectors, synthesize_forbid11)
from .s1 import P_GRID, S1Gadget, build_s1, certify_one_excluded, pad_dimension, s1_core
from .s2 import ZERO_TRIPLES, build_s2, certify_s2, zero_triple_labels
from .s3 import (CASE_I, CASE_I_BASIS, CASE_II, CASE_II_BASIS, AngleError, GadgetAngles,
                 NoRootInBracket, ResidualTooLarge, build_s3, build_s3_minimal, certify_s3_cases,
                 s3_residuals, solve_s3_angles)

__all__ = [n for n in dir() if not n.startswith("_")]
