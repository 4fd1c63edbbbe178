"""Bloch-level simulation of remote preparation with a covering point set.

The sender picks the site nearest the target, prepares at the receiver the
target rotated back into the cap around ``|0>`` (the 2-bit entanglement
transformation and disentangling measurement are taken as given), and sends
the site index. The receiver rotates the north pole onto that site, which
carries the prepared state exactly onto the target.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .bloch import (
    NORTH,
    BlochVector,
    QubitState,
    bloch_from_amplitudes,
    bloch_to_amplitudes,
    rotation_matrices,
)
from .errors import EmptyPointSet, IndexOutOfRange
from .pointsets import PointSet
from .sampling import SAMPLE_CHUNK, sample_sphere
from .voronoi import covering_radius

CORRECTION_BITS = 2
_SITE_CHUNK = 4096


@dataclass(frozen=True)
class RspMessage:
    site_index: int
    index_bits: int
    correction_bits: int = CORRECTION_BITS

    @classmethod
    def for_site(cls, site_index: int, n_sites: int) -> "RspMessage":
        if not 0 <= site_index < n_sites:
            raise IndexOutOfRange(f"site index {site_index} outside [0, {n_sites})")
        return cls(site_index, (n_sites - 1).bit_length())

    @property
    def total_bits(self) -> int:
        return self.index_bits + self.correction_bits


@dataclass(frozen=True)
class SimulationReport:
    n_sites: int
    trials: int
    seed: int
    index_bits: int
    total_bits: int
    max_infidelity_to_site: float
    mean_infidelity_to_site: float
    reconstruction_max_error: float
    rho_f_used: float
    all_within_cap: bool

    def as_dict(self) -> dict:
        return asdict(self)


def _site_rotations(points: np.ndarray) -> np.ndarray:
    north = np.broadcast_to(NORTH.as_array(), points.shape)
    return rotation_matrices(north, points)


def _choose_sites(points: np.ndarray, targets: np.ndarray) -> np.ndarray:
    # argmax keeps the first maximum, so ties go to the lowest index
    idx = np.empty(len(targets), dtype=np.intp)
    for lo in range(0, len(targets), _SITE_CHUNK):
        idx[lo:lo + _SITE_CHUNK] = np.argmax(targets[lo:lo + _SITE_CHUNK] @ points.T, axis=1)
    return idx


def _encode_batch(points, rotations, targets):
    idx = _choose_sites(points, targets)
    back = np.einsum("nji,nj->ni", rotations[idx], targets)  # R^T t
    return idx, bloch_to_amplitudes(back)


def _decode_batch(rotations, idx, amps):
    psi0, re, im = amps
    v = bloch_from_amplitudes(psi0, re + 1j * im)
    out = np.einsum("nij,nj->ni", rotations[idx], v)
    return out / np.linalg.norm(out, axis=1)[:, None]


def encode(sites: PointSet, target: BlochVector) -> tuple[RspMessage, QubitState]:
    """Sender side: the nearest site's index and the state to prepare in the cap at ``|0>``."""
    if len(sites) == 0:
        raise EmptyPointSet("cannot encode against an empty point set")
    pts = sites.points
    idx, amps = _encode_batch(pts, _site_rotations(pts), target.as_array()[None, :])
    psi0, re, im = amps[:, 0]
    return RspMessage.for_site(int(idx[0]), len(sites)), QubitState(psi0, re, im)


def decode(sites: PointSet, msg: RspMessage, phi0: QubitState) -> BlochVector:
    """Receiver side: rotate the prepared state from ``|0>``'s cap to the signalled site."""
    if not 0 <= msg.site_index < len(sites):
        raise IndexOutOfRange(f"site index {msg.site_index} outside [0, {len(sites)})")
    site = sites.points[msg.site_index][None, :]
    R = _site_rotations(site)
    amps = np.array([[phi0.psi0], [phi0.psi1_re], [phi0.psi1_im]])
    return BlochVector.from_array(_decode_batch(R, np.zeros(1, dtype=np.intp), amps)[0])


def _angles(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.arctan2(np.linalg.norm(np.cross(u, v), axis=1), np.einsum("ij,ij->i", u, v))


def run_targets(sites: PointSet, targets: np.ndarray):
    """Encode and decode each target row; returns (site infidelities, angular errors)."""
    pts = sites.points
    rot = _site_rotations(pts)
    idx, amps = _encode_batch(pts, rot, targets)
    out = _decode_batch(rot, idx, amps)
    dots = np.einsum("ij,ij->i", targets, pts[idx])
    infid = 1.0 - np.clip(0.5 * (1.0 + dots), 0.0, 1.0)
    return infid, _angles(out, targets)


def simulate(sites: PointSet, trials: int, seed: int) -> SimulationReport:
    """Run ``trials`` uniformly random targets through encode and decode.

    Target ``k`` depends only on ``(seed, k)``, so the report is the same
    however the trials are batched.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if len(sites) == 0:
        raise EmptyPointSet("cannot simulate with an empty point set")
    rho = covering_radius(sites).rho_f
    worst, total, err = 0.0, 0.0, 0.0
    for lo in range(0, trials, SAMPLE_CHUNK):
        targets = sample_sphere(seed, lo, min(trials, lo + SAMPLE_CHUNK))
        infid, ang = run_targets(sites, targets)
        worst = max(worst, float(infid.max()))
        total += float(infid.sum())
        err = max(err, float(ang.max()))
    msg = RspMessage.for_site(0, len(sites))
    return SimulationReport(
        n_sites=len(sites),
        trials=trials,
        seed=seed,
        index_bits=msg.index_bits,
        total_bits=msg.total_bits,
        max_infidelity_to_site=worst,
        mean_infidelity_to_site=total / trials,
        reconstruction_max_error=err,
        rho_f_used=rho,
        all_within_cap=worst <= rho + 1e-9,
    )
