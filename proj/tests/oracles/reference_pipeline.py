"""Independent reference pipeline used to freeze oracle values for the C++ tests.

Integrals and FCI come from PySCF; cavity, IEF-PCM and the solvent
self-consistency loops are re-implemented here with numpy. Prints a JSON
document with every frozen number.
"""
import json
import os
import sys

import numpy as np
from pyscf import fci, gto
from pyscf.dft import LebedevGrid

ANGSTROM = 1.8897259886
BONDI = {"H": 1.20, "He": 1.40, "C": 1.70, "N": 1.55, "O": 1.52}
HERE = os.path.dirname(os.path.abspath(__file__))
BASIS_DIR = os.path.join(HERE, "..", "..", "data", "basis")

WATER = "O 0.000000 0.000000 0.117300; H 0.000000 0.757200 -0.469200; H 0.000000 -0.757200 -0.469200"
METHANOL = ("C -0.046530 0.662610 0.000000; O -0.046530 -0.754810 0.000000; "
            "H -1.086860 0.982030 0.000000; H 0.437780 1.071990 0.889900; "
            "H 0.437780 1.071990 -0.889900; H 0.865650 -1.034580 0.000000")


def load_basis(name, elements):
    text = open(os.path.join(BASIS_DIR, name + ".basis")).read().splitlines()
    out, el, i = {}, None, 0
    while i < len(text):
        line = text[i].split("#")[0].strip()
        i += 1
        if not line:
            continue
        if line == "****":
            el = None
            continue
        if el is None:
            el = line
            out[el] = []
            continue
        l, n = line.split()
        l = "SPD".index(l)
        prims = [list(map(float, text[i + k].split())) for k in range(int(n))]
        i += int(n)
        out[el].append([l] + prims)
    return {e: out[e] for e in elements}


def make_mol(atoms, basis, unit="angstrom"):
    mol = gto.Mole()
    scale = ANGSTROM if unit == "angstrom" else 1.0
    mol.atom = [(a[0], [x * scale for x in a[1]]) for a in gto.format_atom(atoms, unit=1.0)]
    mol.unit = "bohr"
    elements = sorted(set(a[0] for a in gto.format_atom(atoms)))
    mol.basis = load_basis(basis, elements)
    mol.cart = False
    mol.build()
    return mol


def cavity(mol, npts=302, scale=1.2):
    grid = getattr(LebedevGrid, "MakeAngularGrid_%d" % npts)()[:, :3]
    centers = mol.atom_coords()
    radii = np.array([BONDI[mol.atom_symbol(i)] * ANGSTROM * scale for i in range(mol.natm)])
    pos, nrm, area = [], [], []
    for a in range(mol.natm):
        pts = centers[a] + radii[a] * grid
        keep = np.ones(npts, bool)
        for b in range(mol.natm):
            if b != a:
                keep &= np.linalg.norm(pts - centers[b], axis=1) >= radii[b]
        pos.append(pts[keep])
        nrm.append(grid[keep])
        area.append(np.full(keep.sum(), 4 * np.pi * radii[a] ** 2 / npts))
    return np.vstack(pos), np.vstack(nrm), np.concatenate(area)


class PCM:
    def __init__(self, mol, eps, npts=302):
        self.mol = mol
        s, n, a = cavity(mol, npts)
        self.s, self.a = s, a
        d = s[:, None, :] - s[None, :, :]
        r = np.linalg.norm(d, axis=2)
        np.fill_diagonal(r, 1.0)
        S = 1.0 / r
        np.fill_diagonal(S, 1.0694 * np.sqrt(4 * np.pi / a))
        D = np.einsum("ijx,jx->ij", d, n) / r**3
        np.fill_diagonal(D, 0.0)
        np.fill_diagonal(D, -(2 * np.pi + (D * a).sum(1)) / a)
        f = (eps - 1) / (eps + 1)
        DA = D * a
        I = np.eye(len(a))
        self.K = (2 * np.pi / f * I - DA) @ S if f > 0 else None
        self.R = -(2 * np.pi * I - DA)
        z = mol.atom_charges()
        dist = np.linalg.norm(s[:, None, :] - mol.atom_coords()[None], axis=2)
        self.phi_nuc = (z / dist).sum(1)
        ints = []
        for p in s:
            with mol.with_rinv_origin(p):
                ints.append(mol.intor("int1e_rinv"))
        self.v = np.array(ints)

    def response(self, dm):
        phi = self.phi_nuc - np.einsum("kij,ij->k", self.v, dm)
        if self.K is None:
            z = np.zeros_like(phi)
            return phi, z, z
        q = np.linalg.solve(self.K, self.R @ phi)
        q_sym = 0.5 * (q + self.R.T @ np.linalg.solve(self.K.T, phi))
        return phi, q, q_sym

    def operator(self, q_sym):
        return -np.einsum("k,kij->ij", q_sym, self.v), q_sym @ self.phi_nuc


def rhf(mol, pcm=None, tol=1e-12):
    s = mol.intor("int1e_ovlp")
    h = mol.intor("int1e_kin") + mol.intor("int1e_nuc")
    eri = mol.intor("int2e")
    nocc = mol.nelectron // 2
    w, u = np.linalg.eigh(s)
    x = u @ np.diag(w**-0.5) @ u.T
    e, c = np.linalg.eigh(x.T @ h @ x)
    c = x @ c
    dm = 2 * c[:, :nocc] @ c[:, :nocc].T
    e_old, hist_f, hist_e = 0.0, [], []
    for it in range(500):
        j = np.einsum("pqrs,rs->pq", eri, dm)
        k = np.einsum("prqs,rs->pq", eri, dm)
        fock = h + j - 0.5 * k
        epol = 0.0
        if pcm is not None:
            phi, q, q_sym = pcm.response(dm)
            v, _ = pcm.operator(q_sym)
            fock = fock + v
            epol = 0.5 * q @ phi
        energy = 0.5 * np.sum(dm * (h + h + j - 0.5 * k)) + mol.energy_nuc() + epol
        err = x.T @ (fock @ dm @ s - s @ dm @ fock) @ x
        hist_f.append(fock)
        hist_e.append(err)
        hist_f, hist_e = hist_f[-8:], hist_e[-8:]
        nh = len(hist_f)
        b = -np.ones((nh + 1, nh + 1))
        b[-1, -1] = 0
        for i in range(nh):
            for k2 in range(nh):
                b[i, k2] = np.sum(hist_e[i] * hist_e[k2])
        rhs = np.zeros(nh + 1)
        rhs[-1] = -1
        coef = np.linalg.lstsq(b, rhs, rcond=None)[0][:nh]
        fock = sum(cc * ff for cc, ff in zip(coef, hist_f))
        e, c = np.linalg.eigh(x.T @ fock @ x)
        c = x @ c
        dm = 2 * c[:, :nocc] @ c[:, :nocc].T
        if abs(energy - e_old) < tol and np.abs(err).max() < 1e-9:
            break
        e_old = energy
    out = {"energy": energy, "iterations": it + 1}
    if pcm is not None:
        out["epol"] = epol
    return out, c, dm


def casci(mol, c, ncore, nact, nelec_act, pcm=None, tol=1e-11):
    h = mol.intor("int1e_kin") + mol.intor("int1e_nuc")
    eri = mol.intor("int2e")
    cc, ca = c[:, :ncore], c[:, ncore:ncore + nact]
    dm_core = 2 * cc @ cc.T
    jc = np.einsum("pqrs,rs->pq", eri, dm_core)
    kc = np.einsum("prqs,rs->pq", eri, dm_core)
    ecore = mol.energy_nuc() + np.sum(dm_core * (h + 0.5 * (jc - 0.5 * kc)))
    h_act = ca.T @ (h + jc - 0.5 * kc) @ ca
    g_act = np.einsum("pqrs,pi,qj,rk,sl->ijkl", eri, ca, ca, ca, ca)
    nel = (nelec_act // 2, nelec_act // 2)
    if pcm is None:
        e, vec = fci.direct_spin1.kernel(h_act, g_act, nact, nel, ecore=ecore, conv_tol=1e-14)
        return {"energy": e}, vec
    # solvent macro-iterations starting from the RHF-PCM density
    dm = 2 * c[:, : mol.nelectron // 2] @ c[:, : mol.nelectron // 2].T
    phi, q, q_sym = pcm.response(dm)
    g_old, vec = None, None
    for it in range(100):
        v, cnuc = pcm.operator(q_sym)
        e, vec = fci.direct_spin1.kernel(h_act + ca.T @ v @ ca, g_act, nact, nel,
                                          ecore=ecore + np.sum(dm_core * v) + cnuc,
                                          ci0=vec, conv_tol=1e-14)
        g1 = fci.direct_spin1.make_rdm1(vec, nact, nel)
        dm = dm_core + ca @ g1 @ ca.T
        e_gas = e - np.sum(dm * v) - cnuc
        phi, q, q_sym = pcm.response(dm)
        gsolv = 0.5 * q @ phi
        g = e_gas + gsolv
        if g_old is not None and abs(g - g_old) < tol:
            break
        g_old = g
    return {"energy": g, "gsolv": gsolv, "iterations": it + 1}, vec


def main():
    out = {}
    h2 = make_mol("H 0 0 0; H 0 0 1.4", "sto-3g", unit="bohr")
    out["h2_rhf"], c, _ = rhf(h2)
    out["h2_fci"], _ = casci(h2, c, 0, 2, 2)
    he = make_mol("He 0 0 0", "sto-3g")
    out["he_rhf"], _, _ = rhf(he)
    water = make_mol(WATER, "sto-3g")
    out["water_rhf"], c, _ = rhf(water)
    out["water_casci"], _ = casci(water, c, 1, 6, 8)
    pcm = PCM(water, 78.3553)
    out["water_cavity_tesserae"] = len(pcm.a)
    out["water_rhf_pcm"], c, _ = rhf(water, pcm)
    out["water_casci_pcm"], _ = casci(water, c, 1, 6, 8, pcm)
    h2pcm = PCM(h2, 78.3553)
    out["h2_rhf_pcm"], c, _ = rhf(h2, h2pcm)
    out["h2_fci_pcm"], _ = casci(h2, c, 0, 2, 2, h2pcm)
    wdz = make_mol(WATER, "cc-pvdz")
    out["water_ccpvdz_nao"] = wdz.nao
    out["water_ccpvdz_rhf"], _, _ = rhf(wdz)
    # ESP kernels <mu|1/|r-C||nu> at fixed probe points (bohr)
    probes = [[0.3, -0.4, 2.5], [1.7, 0.2, -0.9], [-2.2, 1.1, 0.4]]
    out["water_esp_probes"] = []
    for c in probes:
        with water.with_rinv_origin(c):
            out["water_esp_probes"].append({"point": c, "matrix": water.intor("int1e_rinv").tolist()})
    meoh = make_mol(METHANOL, "sto-3g")
    out["methanol_rhf"], _, _ = rhf(meoh)
    json.dump(out, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
