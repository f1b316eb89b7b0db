"""Constructive Krull dimension: collapse certificates, entailment lattices, Going Up / Going Down."""

from .chain import CollapseCertificate, IdealisticChain, IdealisticPrime, eval_nested, verify_certificate
from .errors import KrullError
from .ideals import Ideal, ideal_member, radical_member, saturate
from .ring import GF, QQ, ZZ, ExtensionRing, ModularRing, PolynomialRing, ring_make

__version__ = "0.1.0"
