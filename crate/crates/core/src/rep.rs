//! Unitary representations of finite groups (in practice: of the compact
//! subgroup K), their validation, characters, irreducibility and equivalence
//! tests, dual objects, and the subgroup-level Schur integrals.
//!
//! Dual objects come from a builtin catalog — abelian groups are handled
//! generically through an exact cyclic-factor basis, dihedral groups, Q8,
//! S3 and S4 through explicit matrices, direct products by tensoring — or
//! from caller-supplied candidate irreps. No general character-table
//! algorithm is involved.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{permutations_lex, symmetric, CompactSubgroup, Elem, FiniteGroup};
use crate::linalg::{identity, max_abs_diff, unitarity_defect, CMatrix};
use crate::tol;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// Unitary representations
// ---------------------------------------------------------------------------

/// A unitary representation of a finite group: one complex matrix per
/// element. Construction checks shapes only; `validate` measures the
/// homomorphism and unitarity defects.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    carrier: Arc<FiniteGroup>,
    dim: usize,
    mats: Vec<CMatrix>,
    name: String,
}

/// Validation report: the largest homomorphism defect
/// max ‖M(ab) − M(a)M(b)‖_max and the largest unitarity defect
/// max ‖M(g)*M(g) − I‖_max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepReport {
    #[serde(rename = "maxHomomorphismDefect")]
    pub max_hom_defect: f64,
    #[serde(rename = "maxUnitarityDefect")]
    pub max_unitarity_defect: f64,
}

impl RepReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_hom_defect <= tolerance && self.max_unitarity_defect <= tolerance
    }
}

impl UnitaryRep {
    /// Wraps matrices indexed by carrier element. Every element must have a
    /// d×d matrix.
    pub fn new(
        carrier: Arc<FiniteGroup>,
        mats: Vec<Option<CMatrix>>,
        name: impl Into<String>,
    ) -> Result<Self> {
        let n = carrier.order();
        if mats.len() < n {
            return Err(Error::MissingElement { element: mats.len() });
        }
        let mut dense = Vec::with_capacity(n);
        let mut dim = 0usize;
        for (g, m) in mats.into_iter().enumerate().take(n) {
            let m = m.ok_or(Error::MissingElement { element: g })?;
            if g == 0 {
                dim = m.nrows();
            }
            if m.nrows() != dim || m.ncols() != dim || dim == 0 {
                return Err(Error::BadMatrixShape {
                    element: g,
                    rows: m.nrows(),
                    cols: m.ncols(),
                    dim,
                });
            }
            dense.push(m);
        }
        Ok(UnitaryRep {
            carrier,
            dim,
            mats: dense,
            name: name.into(),
        })
    }

    /// Builds from a closure giving the matrix of each element.
    pub fn from_fn(
        carrier: Arc<FiniteGroup>,
        dim: usize,
        name: impl Into<String>,
        f: impl Fn(usize) -> CMatrix,
    ) -> Self {
        let mats = (0..carrier.order()).map(f).collect();
        UnitaryRep {
            carrier,
            dim,
            mats,
            name: name.into(),
        }
    }

    pub fn carrier(&self) -> &Arc<FiniteGroup> {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.mats[g]
    }

    pub fn entry(&self, g: usize, i: usize, j: usize) -> Complex64 {
        self.mats[g][(i, j)]
    }

    /// Measures the worst homomorphism and unitarity defects over all pairs
    /// and elements.
    pub fn validate(&self) -> RepReport {
        let n = self.carrier.order();
        let id = identity(self.dim);
        let mut hom: f64 = max_abs_diff(&self.mats[0], &id);
        let mut uni: f64 = 0.0;
        for a in 0..n {
            uni = uni.max(unitarity_defect(&self.mats[a]));
            for b in 0..n {
                let prod = &self.mats[a] * &self.mats[b];
                hom = hom.max(max_abs_diff(&self.mats[self.carrier.mul(a, b)], &prod));
            }
        }
        RepReport {
            max_hom_defect: hom,
            max_unitarity_defect: uni,
        }
    }

    pub fn require_valid(&self, tolerance: f64) -> Result<()> {
        let r = self.validate();
        if r.max_hom_defect > tolerance {
            return Err(Error::InvalidRep {
                name: self.name.clone(),
                defect: "homomorphism".into(),
                value: r.max_hom_defect,
                tol: tolerance,
            });
        }
        if r.max_unitarity_defect > tolerance {
            return Err(Error::InvalidRep {
                name: self.name.clone(),
                defect: "unitarity".into(),
                value: r.max_unitarity_defect,
                tol: tolerance,
            });
        }
        Ok(())
    }

    /// Trace of each matrix.
    pub fn character(&self) -> Vec<Complex64> {
        self.mats.iter().map(|m| m.diagonal().sum()).collect()
    }

    /// Character norm (1/|G|)·Σ|χ(g)|².
    pub fn character_norm(&self) -> f64 {
        let chi = self.character();
        chi.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.carrier.order() as f64
    }

    /// True iff the character norm is 1 (within the decision tolerance).
    pub fn is_irreducible(&self) -> bool {
        (self.character_norm() - 1.0).abs() <= tol::DECISION
    }

    /// Character-equality equivalence test (sufficient for finite groups).
    /// Dimension mismatch or different carrier order is an ordinary `false`.
    pub fn equivalent(&self, other: &UnitaryRep) -> bool {
        if self.dim != other.dim || self.carrier.order() != other.carrier.order() {
            return false;
        }
        self.character()
            .iter()
            .zip(other.character().iter())
            .all(|(a, b)| (a - b).norm() <= tol::DECISION)
    }
}

/// The representation k ↦ M(g⁻¹kg) of K, for g in the parent group. Requires
/// K normal (guaranteed by construction of `CompactSubgroup`).
pub fn conjugate_rep(sub: &CompactSubgroup, rep: &UnitaryRep, g: Elem) -> Result<UnitaryRep> {
    if !Arc::ptr_eq(rep.carrier(), sub.group()) && rep.carrier().order() != sub.order() {
        return Err(Error::GroupMismatch {
            context: "conjugate_rep: representation is not over this subgroup".into(),
        });
    }
    let parent = sub.parent();
    if !parent.contains(g) {
        return Err(Error::ElementOutOfRange {
            index: g.f,
            order: parent.finite_part().order(),
        });
    }
    let f = parent.finite_part();
    let mats = (0..sub.order())
        .map(|a| {
            let p = sub.members()[a];
            let conj = f.mul(f.mul(f.inv(g.f), p), g.f);
            let b = sub
                .position_of(conj)
                .expect("K normal: conjugate stays in K");
            Some(rep.matrix(b).clone())
        })
        .collect();
    UnitaryRep::new(
        Arc::clone(sub.group()),
        mats,
        format!("{}^g{}", rep.name(), g),
    )
}

/// The subgroup-level Schur integral
/// Σ_k ν(k)·σ_ij(k)·conj(τ_lm(k)) over the common carrier.
pub fn schur_k_integral(
    sigma: &UnitaryRep,
    tau: &UnitaryRep,
    i: usize,
    j: usize,
    l: usize,
    m: usize,
) -> Result<Complex64> {
    for (idx, bound, what) in [
        (i, sigma.dim(), "row of sigma"),
        (j, sigma.dim(), "column of sigma"),
        (l, tau.dim(), "row of tau"),
        (m, tau.dim(), "column of tau"),
    ] {
        if idx >= bound {
            return Err(Error::IndexOutOfRange {
                what: what.into(),
                index: idx,
                bound,
            });
        }
    }
    if sigma.carrier().order() != tau.carrier().order() {
        return Err(Error::GroupMismatch {
            context: "schur_k_integral: different carriers".into(),
        });
    }
    let n = sigma.carrier().order();
    let nu = 1.0 / n as f64;
    Ok((0..n)
        .map(|k| sigma.entry(k, i, j) * tau.entry(k, l, m).conj() * nu)
        .sum())
}

// ---------------------------------------------------------------------------
// Dual objects
// ---------------------------------------------------------------------------

/// A complete list of pairwise inequivalent irreducible unitary
/// representations of K, with Σ d² = |K| enforced.
#[derive(Debug, Clone)]
pub struct DualObject {
    carrier: Arc<FiniteGroup>,
    irreps: Vec<Arc<UnitaryRep>>,
}

impl DualObject {
    pub fn carrier(&self) -> &Arc<FiniteGroup> {
        &self.carrier
    }

    pub fn irreps(&self) -> &[Arc<UnitaryRep>] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    /// Resolves an irrep by index or name; `trivial` always works, and
    /// `omega`/`omega-bar` address the first/last nontrivial character of a
    /// cyclic dual.
    pub fn resolve(&self, id: &str) -> Result<Arc<UnitaryRep>> {
        if let Ok(idx) = id.parse::<usize>() {
            return self
                .irreps
                .get(idx)
                .cloned()
                .ok_or_else(|| Error::IndexOutOfRange {
                    what: "irrep index".into(),
                    index: idx,
                    bound: self.irreps.len(),
                });
        }
        let wanted = match id {
            "trivial" => {
                return self
                    .irreps
                    .iter()
                    .find(|r| {
                        r.dim() == 1
                            && (0..r.carrier().order())
                                .all(|g| (r.entry(g, 0, 0) - c64(1.0, 0.0)).norm() < 1e-12)
                    })
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput("no trivial irrep in this dual".into()));
            }
            "omega" => "chi1",
            "omega-bar" | "omegabar" => {
                return self
                    .irreps
                    .last()
                    .filter(|r| self.irreps.len() >= 2 && r.dim() == 1)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput("no omega-bar in this dual".into()));
            }
            other => other,
        };
        self.irreps
            .iter()
            .find(|r| r.name() == wanted || r.name() == id)
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("no irrep named `{id}`")))
    }

    /// Validates irreducibility, pairwise inequivalence, and completeness.
    fn validated(carrier: Arc<FiniteGroup>, irreps: Vec<UnitaryRep>) -> Result<Self> {
        for r in &irreps {
            r.require_valid(tol::STRUCTURAL)?;
            if !r.is_irreducible() {
                return Err(Error::NotIrreducible {
                    name: r.name().to_string(),
                    norm: r.character_norm(),
                });
            }
        }
        for a in 0..irreps.len() {
            for b in 0..a {
                if irreps[a].equivalent(&irreps[b]) {
                    return Err(Error::DuplicateIrrep {
                        first: irreps[b].name().to_string(),
                        second: irreps[a].name().to_string(),
                    });
                }
            }
        }
        let sum: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
        if sum != carrier.order() {
            return Err(Error::IncompleteDual {
                sum,
                order: carrier.order(),
            });
        }
        Ok(DualObject {
            carrier,
            irreps: irreps.into_iter().map(Arc::new).collect(),
        })
    }
}

/// Builds the dual object of K from the builtin catalog.
pub fn dual_object(sub: &CompactSubgroup) -> Result<DualObject> {
    let carrier = Arc::clone(sub.group());
    let irreps = catalog_irreps(&carrier)?;
    DualObject::validated(carrier, irreps)
}

/// Builds a dual object from caller-supplied irreps over the subgroup's
/// abstract group; the same completeness and inequivalence checks apply.
pub fn dual_object_from_irreps(
    sub: &CompactSubgroup,
    irreps: Vec<UnitaryRep>,
) -> Result<DualObject> {
    DualObject::validated(Arc::clone(sub.group()), irreps)
}

fn catalog_irreps(g: &Arc<FiniteGroup>) -> Result<Vec<UnitaryRep>> {
    if g.is_abelian() {
        return Ok(abelian_characters(g));
    }
    if let Some(irreps) = product_irreps_by_name(g)? {
        return Ok(irreps);
    }
    // Non-abelian catalog entries are matched by table equality, so they
    // apply both to groups we built ourselves and to re-indexed subgroups
    // that happen to share the table.
    let n = g.order();
    if n % 2 == 0 && n >= 6 {
        let dn = crate::group::dihedral(n / 2);
        if same_table(g, &dn) {
            return Ok(dihedral_irreps(g, n / 2));
        }
    }
    if n == 8 && same_table(g, &crate::group::quaternion8()) {
        return Ok(quaternion_irreps(g));
    }
    if n == 6 && same_table(g, &symmetric(3)) {
        return Ok(symmetric3_irreps(g));
    }
    if n == 24 && same_table(g, &symmetric(4)) {
        return Ok(symmetric4_irreps(g));
    }
    Err(Error::UnknownDual {
        name: g.name().to_string(),
        order: g.order(),
    })
}

fn same_table(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    a.order() == b.order()
        && (0..a.order()).all(|x| (0..a.order()).all(|y| a.mul(x, y) == b.mul(x, y)))
}

// --- abelian groups ---------------------------------------------------------

/// A cyclic-factor basis of an abelian group: generators g_i of orders n_i
/// with every element written uniquely as Π g_i^{a_i}.
struct AbelianBasis {
    orders: Vec<usize>,
    /// exponents[element] = (a_1, …, a_r)
    exponents: Vec<Vec<usize>>,
}

fn abelian_basis(g: &FiniteGroup) -> AbelianBasis {
    let n = g.order();
    // candidates by descending order, then ascending index
    let mut by_order: Vec<usize> = (1..n).collect();
    by_order.sort_by_key(|&a| (std::cmp::Reverse(g.element_order(a)), a));

    // span: element -> exponent tuple (innermost generator appended last)
    fn extend(
        g: &FiniteGroup,
        span: &BTreeMap<usize, Vec<usize>>,
        candidates: &[usize],
        total: usize,
    ) -> Option<(Vec<usize>, BTreeMap<usize, Vec<usize>>)> {
        if span.len() == total {
            return Some((Vec::new(), span.clone()));
        }
        'cand: for &cand in candidates {
            let ord = g.element_order(cand);
            // direct-sum condition: no nontrivial power of cand lies in span
            let mut x = cand;
            for _ in 1..ord {
                if span.contains_key(&x) {
                    continue 'cand;
                }
                x = g.mul(x, cand);
            }
            // grow the span
            let mut grown = BTreeMap::new();
            let mut power = 0usize; // cand^e
            for e in 0..ord {
                for (&s, exps) in span.iter() {
                    let mut v = exps.clone();
                    v.push(e);
                    grown.insert(g.mul(s, power), v);
                }
                power = g.mul(power, cand);
            }
            if grown.len() != span.len() * ord {
                continue; // not direct after all
            }
            if let Some((mut orders, full)) = extend(g, &grown, candidates, total) {
                orders.insert(0, ord);
                return Some((orders, full));
            }
        }
        None
    }

    let mut seed = BTreeMap::new();
    seed.insert(0usize, Vec::new());
    let (orders, full) = extend(g, &seed, &by_order, n)
        .expect("every finite abelian group has a cyclic-factor basis");
    // exponents were appended as generators were added (first chosen first);
    // orders (reconstructed outer-to-inner) already match that order.
    let r = orders.len();
    let mut exponents = vec![Vec::new(); n];
    for (elem, v) in full {
        debug_assert_eq!(v.len(), r);
        exponents[elem] = v;
    }
    AbelianBasis { orders, exponents }
}

/// All characters of an abelian group, exactly, ordered lexicographically by
/// their exponent multi-index (so chi0 is trivial and, for a cyclic group
/// generated by the smallest maximal-order element, chi1 sends that
/// generator to e^{2πi/n}).
fn abelian_characters(g: &Arc<FiniteGroup>) -> Vec<UnitaryRep> {
    let basis = Arc::new(abelian_basis(g));
    let r = basis.orders.len();
    let n = g.order();
    let mut out = Vec::with_capacity(n);
    let mut b = vec![0usize; r];
    for index in 0..n {
        let bb = b.clone();
        let basis_ref = Arc::clone(&basis);
        let rep = UnitaryRep::from_fn(Arc::clone(g), 1, format!("chi{index}"), move |elem| {
            let mut phase = 0.0f64;
            for i in 0..basis_ref.orders.len() {
                let a = basis_ref.exponents[elem][i] * bb[i] % basis_ref.orders[i];
                phase += a as f64 / basis_ref.orders[i] as f64;
            }
            CMatrix::from_element(1, 1, Complex64::from_polar(1.0, TAU * phase))
        });
        out.push(rep);
        // increment multi-index, last coordinate fastest
        let mut i = r;
        while i > 0 {
            i -= 1;
            b[i] += 1;
            if b[i] < basis.orders[i] {
                break;
            }
            b[i] = 0;
        }
    }
    out
}

// --- dihedral ----------------------------------------------------------------

/// Irreps of the dihedral group of order 2n in the builder's indexing
/// (0..n rotations, n..2n reflections).
fn dihedral_irreps(g: &Arc<FiniteGroup>, n: usize) -> Vec<UnitaryRep> {
    let mut out = Vec::new();
    let chr = |name: &str, f: Box<dyn Fn(usize) -> f64>| {
        UnitaryRep::from_fn(Arc::clone(g), 1, name, move |e| {
            CMatrix::from_element(1, 1, c64(f(e), 0.0))
        })
    };
    out.push(chr("triv", Box::new(|_| 1.0)));
    out.push(chr(
        "sign",
        Box::new(move |e| if e >= n { -1.0 } else { 1.0 }),
    ));
    if n % 2 == 0 {
        out.push(chr(
            "sign2",
            Box::new(move |e| if (e % n) % 2 == 0 { 1.0 } else { -1.0 }),
        ));
        out.push(chr(
            "sign3",
            Box::new(move |e| {
                let rot = if (e % n) % 2 == 0 { 1.0 } else { -1.0 };
                if e >= n {
                    -rot
                } else {
                    rot
                }
            }),
        ));
    }
    for h in 1..=(n.saturating_sub(1)) / 2 {
        let rep = UnitaryRep::from_fn(Arc::clone(g), 2, format!("rho{h}"), move |e| {
            let (refl, i) = (e >= n, e % n);
            let w = Complex64::from_polar(1.0, TAU * ((h * i) % n) as f64 / n as f64);
            if refl {
                // s·r^i ↦ [[0, w̄],[w, 0]]
                CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), w.conj(), w, c64(0.0, 0.0)])
            } else {
                CMatrix::from_row_slice(2, 2, &[w, c64(0.0, 0.0), c64(0.0, 0.0), w.conj()])
            }
        });
        out.push(rep);
    }
    out
}

// --- quaternion ---------------------------------------------------------------

fn quaternion_irreps(g: &Arc<FiniteGroup>) -> Vec<UnitaryRep> {
    // characters factor through Q8/{±1}; named by which units map to +1
    let chr = |name: &str, si: f64, sj: f64| {
        UnitaryRep::from_fn(Arc::clone(g), 1, name, move |e| {
            let v = match e / 2 {
                0 => 1.0,
                1 => si,
                2 => sj,
                _ => si * sj,
            };
            CMatrix::from_element(1, 1, c64(v, 0.0))
        })
    };
    let two = UnitaryRep::from_fn(Arc::clone(g), 2, "two", |e| {
        let base = match e / 2 {
            0 => identity(2),
            1 => CMatrix::from_row_slice(
                2,
                2,
                &[c64(0.0, 1.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, -1.0)],
            ),
            2 => CMatrix::from_row_slice(
                2,
                2,
                &[c64(0.0, 0.0), c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0)],
            ),
            _ => CMatrix::from_row_slice(
                2,
                2,
                &[c64(0.0, 0.0), c64(0.0, 1.0), c64(0.0, 1.0), c64(0.0, 0.0)],
            ),
        };
        if e % 2 == 1 {
            -base
        } else {
            base
        }
    });
    vec![
        chr("triv", 1.0, 1.0),
        chr("chi_i", 1.0, -1.0),
        chr("chi_j", -1.0, 1.0),
        chr("chi_k", -1.0, -1.0),
        two,
    ]
}

// --- symmetric groups ----------------------------------------------------------

/// Matrix of a permutation acting on the sum-zero subspace of R^n, in the
/// orthonormal basis obtained from e_0−e_1, e_1−e_2, … by Gram-Schmidt.
/// This is the (n−1)-dimensional standard representation.
pub fn standard_rep_matrix(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let d = n - 1;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut v = vec![0.0f64; n];
        v[i] = 1.0;
        v[i + 1] = -1.0;
        for b in &basis {
            let dot: f64 = v.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b.iter()) {
                *x -= dot * y;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        basis.push(v);
    }
    // entries: ⟨P(π) b_j, b_i⟩ with (P(π) v)[π(x)] = v[x]
    CMatrix::from_fn(d, d, |i, j| {
        let mut acc = 0.0;
        for x in 0..n {
            acc += basis[j][x] * basis[i][perm[x]];
        }
        c64(acc, 0.0)
    })
}

fn perm_sign(perm: &[usize]) -> f64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1.0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn symmetric3_irreps(g: &Arc<FiniteGroup>) -> Vec<UnitaryRep> {
    let perms = permutations_lex(3);
    let triv = UnitaryRep::from_fn(Arc::clone(g), 1, "triv", |_| {
        CMatrix::from_element(1, 1, c64(1.0, 0.0))
    });
    let perms_sign = perms.clone();
    let sign = UnitaryRep::from_fn(Arc::clone(g), 1, "sign", move |e| {
        CMatrix::from_element(1, 1, c64(perm_sign(&perms_sign[e]), 0.0))
    });
    let std2 = UnitaryRep::from_fn(Arc::clone(g), 2, "std", move |e| {
        standard_rep_matrix(&perms[e])
    });
    vec![triv, sign, std2]
}

/// The permutation of the three pair-partitions {{a,b},{c,d}} of {0,1,2,3}
/// induced by an element of S4; its kernel is the Klein four-group.
fn pair_partition_action(perm: &[usize]) -> Vec<usize> {
    // partition p is the one pairing 0 with p+1
    (0..3)
        .map(|p| {
            let a = perm[0];
            let b = perm[p + 1];
            // image partition pairs a with b; find the partner of 0
            let partner = if a == 0 {
                b
            } else if b == 0 {
                a
            } else {
                // 0 is in the other block {c, d} = complement of {a, b}
                let mut rest = [true; 4];
                rest[a] = false;
                rest[b] = false;
                // the two remaining letters; 0 is one of them
                let others: Vec<usize> = (0..4).filter(|&x| rest[x]).collect();
                if others[0] == 0 {
                    others[1]
                } else {
                    others[0]
                }
            };
            partner - 1
        })
        .collect()
}

fn symmetric4_irreps(g: &Arc<FiniteGroup>) -> Vec<UnitaryRep> {
    let perms = permutations_lex(4);
    let triv = UnitaryRep::from_fn(Arc::clone(g), 1, "triv", |_| {
        CMatrix::from_element(1, 1, c64(1.0, 0.0))
    });
    let p1 = perms.clone();
    let sign = UnitaryRep::from_fn(Arc::clone(g), 1, "sign", move |e| {
        CMatrix::from_element(1, 1, c64(perm_sign(&p1[e]), 0.0))
    });
    let p2 = perms.clone();
    let two = UnitaryRep::from_fn(Arc::clone(g), 2, "two", move |e| {
        standard_rep_matrix(&pair_partition_action(&p2[e]))
    });
    let p3 = perms.clone();
    let std3 = UnitaryRep::from_fn(Arc::clone(g), 3, "std", move |e| {
        standard_rep_matrix(&p3[e])
    });
    let p4 = perms;
    let std3s = UnitaryRep::from_fn(Arc::clone(g), 3, "stdsign", move |e| {
        standard_rep_matrix(&p4[e]) * c64(perm_sign(&p4[e]), 0.0)
    });
    vec![triv, sign, two, std3, std3s]
}

// --- direct products ------------------------------------------------------------

/// For groups built as direct products (name "AxB"), tensors the factor
/// duals. Returns Ok(None) when the name does not describe a product we can
/// reconstruct.
fn product_irreps_by_name(g: &Arc<FiniteGroup>) -> Result<Option<Vec<UnitaryRep>>> {
    let name = g.name().to_string();
    let Some((head, tail)) = name.split_once('x') else {
        return Ok(None);
    };
    let (Ok(a), Ok(b)) = (crate::group::builtin(head), crate::group::builtin(tail)) else {
        return Ok(None);
    };
    let product = crate::group::direct_product(&a, &b);
    if !same_table(g, &product) {
        return Ok(None);
    }
    let a = Arc::new(a);
    let b = Arc::new(b);
    let irreps_a = catalog_irreps(&a)?;
    let irreps_b = catalog_irreps(&b)?;
    let nb = b.order();
    let mut out = Vec::new();
    for ra in &irreps_a {
        for rb in &irreps_b {
            let (ra, rb) = (ra.clone(), rb.clone());
            let name = format!("{}(x){}", ra.name(), rb.name());
            let dim = ra.dim() * rb.dim();
            let rep = UnitaryRep::from_fn(Arc::clone(g), dim, name, move |e| {
                ra.matrix(e / nb).kronecker(rb.matrix(e % nb))
            });
            out.push(rep);
        }
    }
    Ok(Some(out))
}

// ---------------------------------------------------------------------------
// Wire format for caller-supplied irreps
// ---------------------------------------------------------------------------

/// Parses an irrep from its JSON form
/// `{"dim": d, "matrices": {"<elementIndex>": [[[re,im], ...], ...]}}`.
pub fn irrep_from_spec(
    sub: &CompactSubgroup,
    spec: &crate::jsonio::IrrepSpec,
    name: impl Into<String>,
) -> Result<UnitaryRep> {
    let n = sub.group().order();
    let mut mats: Vec<Option<CMatrix>> = vec![None; n];
    for (key, rows) in &spec.matrices {
        let idx: usize = key
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad element index `{key}`")))?;
        if idx >= n {
            return Err(Error::ElementOutOfRange { index: idx, order: n });
        }
        mats[idx] = Some(crate::jsonio::matrix_from_rows(rows, spec.dim)?);
    }
    UnitaryRep::new(Arc::clone(sub.group()), mats, name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{check_normal, cyclic, dihedral, quaternion8, LCGroup};
    use crate::linalg::nullity;

    fn sub_full(g: FiniteGroup) -> CompactSubgroup {
        let order = g.order();
        let parent = Arc::new(LCGroup::finite(g));
        check_normal(&parent, &(0..order).collect::<Vec<_>>()).unwrap()
    }

    fn dual_of(g: FiniteGroup) -> DualObject {
        dual_object(&sub_full(g)).unwrap()
    }

    #[test]
    fn trivial_rep_validates_exactly() {
        let k = sub_full(symmetric(3));
        let triv = UnitaryRep::from_fn(Arc::clone(k.group()), 1, "triv", |_| {
            CMatrix::from_element(1, 1, c64(1.0, 0.0))
        });
        let r = triv.validate();
        assert_eq!(r.max_hom_defect, 0.0);
        assert_eq!(r.max_unitarity_defect, 0.0);
    }

    #[test]
    fn sign_character_of_z2_validates() {
        let k = sub_full(cyclic(2));
        let sign = UnitaryRep::from_fn(Arc::clone(k.group()), 1, "sign", |e| {
            CMatrix::from_element(1, 1, c64(if e == 0 { 1.0 } else { -1.0 }, 0.0))
        });
        let r = sign.validate();
        assert_eq!(r.max_hom_defect, 0.0);
        assert_eq!(r.max_unitarity_defect, 0.0);
    }

    #[test]
    fn broken_z3_map_reports_homomorphism_defect() {
        let k = sub_full(cyclic(3));
        let w = Complex64::from_polar(1.0, TAU / 3.0);
        // generator ↦ ω but its square ↦ 1: worst defect |ω² − 1|
        let broken = UnitaryRep::from_fn(Arc::clone(k.group()), 1, "broken", move |e| {
            CMatrix::from_element(1, 1, if e == 1 { w } else { c64(1.0, 0.0) })
        });
        let r = broken.validate();
        let expected = (w * w - c64(1.0, 0.0)).norm();
        assert!((r.max_hom_defect - expected).abs() < 1e-12);
        assert!(broken.require_valid(tol::STRUCTURAL).is_err());
    }

    #[test]
    fn missing_matrix_is_reported() {
        let k = sub_full(cyclic(3));
        let mats = vec![Some(identity(1)), None, Some(identity(1))];
        assert!(matches!(
            UnitaryRep::new(Arc::clone(k.group()), mats, "partial"),
            Err(Error::MissingElement { element: 1 })
        ));
    }

    #[test]
    fn characters_of_known_reps() {
        let s3 = dual_of(symmetric(3));
        let std = s3.resolve("std").unwrap();
        let chi = std.character();
        // identity, three transpositions (lex indices 1, 2, 5), two 3-cycles
        assert!((chi[0] - c64(2.0, 0.0)).norm() < 1e-12);
        for t in [1usize, 2, 5] {
            assert!(chi[t].norm() < 1e-12);
        }
        for r in [3usize, 4] {
            assert!((chi[r] - c64(-1.0, 0.0)).norm() < 1e-12);
        }

        // regular representation of Z2: χ = (2, 0)
        let k = sub_full(cyclic(2));
        let reg = UnitaryRep::from_fn(Arc::clone(k.group()), 2, "regular", |e| {
            if e == 0 {
                identity(2)
            } else {
                CMatrix::from_row_slice(
                    2,
                    2,
                    &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)],
                )
            }
        });
        let chi = reg.character();
        assert!((chi[0] - c64(2.0, 0.0)).norm() < 1e-12);
        assert!(chi[1].norm() < 1e-12);
        assert!(!reg.is_irreducible());
        assert!((reg.character_norm() - 2.0).abs() < 1e-12);
    }

    /// Independent oracle: the commutant of an irreducible rep has dimension
    /// one. Solve X·M(g) = M(g)·X for all g as a linear system in X.
    fn commutant_dimension(rep: &UnitaryRep) -> usize {
        let d = rep.dim();
        let n = rep.carrier().order();
        let mut rows = Vec::new();
        for g in 0..n {
            let m = rep.matrix(g);
            for i in 0..d {
                for j in 0..d {
                    let mut row = vec![c64(0.0, 0.0); d * d];
                    for k in 0..d {
                        row[i * d + k] += m[(k, j)];
                        row[k * d + j] -= m[(i, k)];
                    }
                    rows.push(row);
                }
            }
        }
        let mat = CMatrix::from_fn(rows.len(), d * d, |r, c| rows[r][c]);
        nullity(&mat, 1e-9)
    }

    #[test]
    fn character_norm_agrees_with_commutant_oracle() {
        for g in [cyclic(4), cyclic(6), dihedral(4), quaternion8(), symmetric(3)] {
            let dual = dual_of(g);
            for r in dual.irreps() {
                assert_eq!(commutant_dimension(r), 1, "irrep {}", r.name());
                assert!(r.is_irreducible());
            }
        }
    }

    #[test]
    fn equivalence_tests() {
        let z3 = dual_of(cyclic(3));
        let omega = z3.resolve("omega").unwrap();
        let omega_bar = z3.resolve("omega-bar").unwrap();
        assert!(omega.equivalent(&omega));
        assert!(!omega.equivalent(&omega_bar));
        // conjugating the 2-dim irrep of S3 by a fixed element preserves it
        let g = Arc::new(LCGroup::finite(symmetric(3)));
        let k = Arc::new(check_normal(&g, &(0..6).collect::<Vec<_>>()).unwrap());
        let dual = dual_object(&k).unwrap();
        let std = dual.resolve("std").unwrap();
        let conj = conjugate_rep(&k, &std, Elem::finite(2)).unwrap();
        assert!(std.equivalent(&conj));
    }

    #[test]
    fn conjugating_omega_by_a_reflection_gives_omega_bar() {
        let g = Arc::new(LCGroup::finite(symmetric(3)));
        let a3 = g.finite_part().squares_subgroup();
        let k = Arc::new(check_normal(&g, &a3).unwrap());
        let dual = dual_object(&k).unwrap();
        let omega = dual.resolve("omega").unwrap();
        let omega_bar = dual.resolve("omega-bar").unwrap();
        // identity conjugation: identical matrices
        let same = conjugate_rep(&k, &omega, Elem::finite(0)).unwrap();
        for e in 0..3 {
            assert_eq!(same.entry(e, 0, 0), omega.entry(e, 0, 0));
        }
        // conjugation by the smallest reflection swaps the 3-cycles
        let swapped = conjugate_rep(&k, &omega, Elem::finite(1)).unwrap();
        assert!(swapped.equivalent(&omega_bar));
        assert!(!swapped.equivalent(&omega));
        // character of the conjugate equals character composed with
        // conjugation, bit for bit
        let chi = omega.character();
        let f = g.finite_part();
        for a in 0..k.order() {
            let p = k.members()[a];
            let conj = f.mul(f.mul(f.inv(1), p), 1);
            let b = k.position_of(conj).unwrap();
            assert_eq!(swapped.character()[a], chi[b]);
        }
    }

    #[test]
    fn dual_objects_of_builtins_are_complete() {
        for (g, dims) in [
            (cyclic(1), vec![1]),
            (cyclic(3), vec![1, 1, 1]),
            (symmetric(3), vec![1, 1, 2]),
            (dihedral(3), vec![1, 1, 2]),
            (dihedral(4), vec![1, 1, 1, 1, 2]),
            (quaternion8(), vec![1, 1, 1, 1, 2]),
            (symmetric(4), vec![1, 1, 2, 3, 3]),
            (crate::group::builtin("Z2xZ2").unwrap(), vec![1, 1, 1, 1]),
            (crate::group::builtin("Z2xZ4").unwrap(), vec![1; 8]),
        ] {
            let name = g.name().to_string();
            let dual = dual_of(g);
            let mut got: Vec<usize> = dual.irreps().iter().map(|r| r.dim()).collect();
            got.sort_unstable();
            assert_eq!(got, dims, "dims of {name}");
        }
    }

    #[test]
    fn z3_dual_is_the_three_roots_of_unity() {
        let dual = dual_of(cyclic(3));
        let omega = dual.resolve("omega").unwrap();
        let w = Complex64::from_polar(1.0, TAU / 3.0);
        assert!((omega.entry(1, 0, 0) - w).norm() < 1e-14);
        let omega_bar = dual.resolve("omega-bar").unwrap();
        assert!((omega_bar.entry(1, 0, 0) - w.conj()).norm() < 1e-14);
    }

    #[test]
    fn v4_inside_s4_gets_a_dual() {
        let g = Arc::new(LCGroup::finite(symmetric(4)));
        let a4 = g.finite_part().squares_subgroup();
        let f = g.finite_part();
        let v4: Vec<usize> = a4.iter().copied().filter(|&x| f.mul(x, x) == 0).collect();
        assert_eq!(v4.len(), 4);
        let k = Arc::new(check_normal(&g, &v4).unwrap());
        let dual = dual_object(&k).unwrap();
        assert_eq!(dual.len(), 4);
        assert!(dual.irreps().iter().all(|r| r.dim() == 1));
    }

    #[test]
    fn schur_k_integrals_match_the_classical_targets() {
        // trivial rep: integral = 1
        let k = sub_full(cyclic(1));
        let dual = dual_object(&k).unwrap();
        let triv = &dual.irreps()[0];
        assert!((schur_k_integral(triv, triv, 0, 0, 0, 0).unwrap() - c64(1.0, 0.0)).norm() < 1e-15);

        // distinct characters of Z3: integral = 0
        let dual = dual_of(cyclic(3));
        let omega = dual.resolve("omega").unwrap();
        let omega_bar = dual.resolve("omega-bar").unwrap();
        assert!(schur_k_integral(&omega, &omega_bar, 0, 0, 0, 0)
            .unwrap()
            .norm()
            < 1e-15);

        // 2-dim irrep of S3 over the whole group: diagonal value 1/d = 1/2
        let dual = dual_of(symmetric(3));
        let std = dual.resolve("std").unwrap();
        let v = schur_k_integral(&std, &std, 0, 0, 0, 0).unwrap();
        assert!((v - c64(0.5, 0.0)).norm() < 1e-12);
        assert!(schur_k_integral(&std, &std, 0, 0, 1, 1).unwrap().norm() < 1e-12);
        assert!(matches!(
            schur_k_integral(&std, &std, 2, 0, 0, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn full_schur_table_over_every_builtin_dual() {
        for g in [
            cyclic(2),
            cyclic(5),
            cyclic(8),
            dihedral(3),
            dihedral(4),
            quaternion8(),
            symmetric(3),
            symmetric(4),
        ] {
            let dual = dual_of(g);
            for (si, sigma) in dual.irreps().iter().enumerate() {
                for (ti, tau) in dual.irreps().iter().enumerate() {
                    for i in 0..sigma.dim() {
                        for j in 0..sigma.dim() {
                            for l in 0..tau.dim() {
                                for m in 0..tau.dim() {
                                    let v = schur_k_integral(sigma, tau, i, j, l, m).unwrap();
                                    let want = if si == ti && i == l && j == m {
                                        1.0 / sigma.dim() as f64
                                    } else {
                                        0.0
                                    };
                                    assert!(
                                        (v - c64(want, 0.0)).norm() < 1e-10,
                                        "{} vs {} at ({i},{j},{l},{m}): {v}",
                                        sigma.name(),
                                        tau.name()
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn user_supplied_duals_are_checked() {
        let k = sub_full(cyclic(2));
        let triv = UnitaryRep::from_fn(Arc::clone(k.group()), 1, "triv", |_| {
            CMatrix::from_element(1, 1, c64(1.0, 0.0))
        });
        assert!(matches!(
            dual_object_from_irreps(&k, vec![triv.clone()]),
            Err(Error::IncompleteDual { sum: 1, order: 2 })
        ));
        assert!(matches!(
            dual_object_from_irreps(&k, vec![triv.clone(), triv]),
            Err(Error::DuplicateIrrep { .. })
        ));
    }
}
