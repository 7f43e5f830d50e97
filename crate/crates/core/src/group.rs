//! Exact models of locally compact groups with a compact normal subgroup.
//!
//! Two models are supported: finite groups given by a validated Cayley table,
//! and Z×F with F finite (the Z factor is central, so a compact subgroup of
//! {0}×F stays normal). The three measures are normalized once and for all:
//! ν(K) = 1, μ gives mass 1 to every coset, and λ = μ⊗ν assigns mass 1/|K|
//! to every point, so integration of finitely supported functions is an exact
//! finite sum.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Finite groups
// ---------------------------------------------------------------------------

/// A finite group as a validated Cayley table. Element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>, // row-major: table[a * order + b] = a·b
    inverse: Vec<usize>,
    name: String,
}

impl FiniteGroup {
    /// Validates a Cayley table: identity at index 0, two-sided inverses,
    /// associativity on all triples.
    pub fn from_table(table: Vec<Vec<usize>>, name: impl Into<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty Cayley table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "Cayley table is not square: row of length {} in table of size {}",
                    row.len(),
                    n
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidInput(format!(
                        "Cayley table entry {v} out of range for order {n}"
                    )));
                }
                flat.push(v);
            }
        }
        // identity must be index 0
        for a in 0..n {
            if flat[a] != a {
                return Err(Error::NoIdentity { witness: a });
            }
            if flat[a * n] != a {
                return Err(Error::NoIdentity { witness: a });
            }
        }
        // two-sided inverses
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| flat[a * n + b] == 0 && flat[b * n + a] == 0) {
                Some(b) => inverse[a] = b,
                None => return Err(Error::NoInverse { element: a }),
            }
        }
        // associativity
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    let lhs = flat[ab * n + c];
                    let rhs = flat[a * n + flat[b * n + c]];
                    if lhs != rhs {
                        return Err(Error::NonAssociative { a, b, c, lhs, rhs });
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order: n,
            table: flat,
            inverse,
            name: name.into(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut ord = 1;
        while x != 0 {
            x = self.mul(x, a);
            ord += 1;
        }
        ord
    }

    /// Smallest subgroup containing the given elements.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if !seen[y] {
                        seen[y] = true;
                        members.push(y);
                        frontier.push(y);
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Center of the group, as sorted element indices.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Subgroup generated by all squares. For a symmetric group this is the
    /// alternating subgroup.
    pub fn squares_subgroup(&self) -> Vec<usize> {
        let squares: Vec<usize> = (0..self.order).map(|g| self.mul(g, g)).collect();
        self.generated_subgroup(&squares)
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// Cyclic group of order n.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    FiniteGroup::from_table(cyclic_table(n), format!("Z{n}")).expect("cyclic table is a group")
}

/// Dihedral group of order 2n. Indices 0..n are the rotations r^i, indices
/// n..2n are the reflections s·r^i.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let idx = |refl: bool, i: usize| if refl { n + i } else { i };
    let mut table = vec![vec![0usize; 2 * n]; 2 * n];
    for a in 0..2 * n {
        let (ar, ai) = (a >= n, a % n);
        for b in 0..2 * n {
            let (br, bi) = (b >= n, b % n);
            // (s^ar r^ai)(s^br r^bi) with s r s = r^{-1}
            table[a][b] = match (ar, br) {
                (false, false) => idx(false, (ai + bi) % n),
                (false, true) => idx(true, (n + bi - ai) % n),
                (true, false) => idx(true, (ai + bi) % n),
                (true, true) => idx(false, (n + bi - ai) % n),
            };
        }
    }
    FiniteGroup::from_table(table, format!("D{n}")).expect("dihedral table is a group")
}

/// All permutations of {0..n-1} in lexicographic order of one-line notation.
pub fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Composition: apply `q` first, then `p`.
pub fn compose_perms(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

/// Symmetric group on n letters (n ≤ 5), elements ordered lexicographically.
pub fn symmetric(n: usize) -> FiniteGroup {
    assert!((1..=5).contains(&n), "symmetric group supported for n <= 5");
    let perms = permutations_lex(n);
    let index: BTreeMap<Vec<usize>, usize> =
        perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let table = perms
        .iter()
        .map(|p| perms.iter().map(|q| index[&compose_perms(p, q)]).collect())
        .collect();
    FiniteGroup::from_table(table, format!("S{n}")).expect("symmetric table is a group")
}

/// The quaternion group {±1, ±i, ±j, ±k}, indexed 0:1, 1:-1, 2:i, 3:-i,
/// 4:j, 5:-j, 6:k, 7:-k.
pub fn quaternion8() -> FiniteGroup {
    // unit products: (u, v) -> (result unit, sign)
    let unit_mul = |u: usize, v: usize| -> (usize, bool) {
        match (u, v) {
            (0, x) => (x, false),
            (x, 0) => (x, false),
            (1, 1) => (0, true),
            (1, 2) => (3, false),
            (1, 3) => (2, true),
            (2, 1) => (3, true),
            (2, 2) => (0, true),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (3, 2) => (1, true),
            (3, 3) => (0, true),
            _ => unreachable!(),
        }
    };
    let mut table = vec![vec![0usize; 8]; 8];
    for a in 0..8 {
        let (ua, sa) = (a / 2, a % 2 == 1);
        for b in 0..8 {
            let (ub, sb) = (b / 2, b % 2 == 1);
            let (uc, flip) = unit_mul(ua, ub);
            let sc = sa ^ sb ^ flip;
            table[a][b] = uc * 2 + usize::from(sc);
        }
    }
    FiniteGroup::from_table(table, "Q8").expect("quaternion table is a group")
}

/// Direct product; element (a, b) has index a·|B| + b.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let table = (0..na * nb)
        .map(|x| {
            let (xa, xb) = (x / nb, x % nb);
            (0..na * nb)
                .map(|y| {
                    let (ya, yb) = (y / nb, y % nb);
                    a.mul(xa, ya) * nb + b.mul(xb, yb)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(table, format!("{}x{}", a.name(), b.name()))
        .expect("product table is a group")
}

/// Builds a group from a builtin name: `Z<n>`/`C<n>`, `D<n>` (order 2n),
/// `S<n>` (n ≤ 5), `Q8`, or products like `Z2xZ2`.
pub fn builtin(name: &str) -> Result<FiniteGroup> {
    if let Some((head, tail)) = name.split_once('x') {
        // left-associated products
        let mut g = builtin(head)?;
        for part in tail.split('x') {
            g = direct_product(&g, &builtin(part)?);
        }
        let canonical = name.to_string();
        return FiniteGroup::from_table_unchecked_rename(g, canonical);
    }
    let parse_n = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("bad builtin group name `{name}`")))
    };
    match name {
        "Q8" => Ok(quaternion8()),
        _ if name.starts_with('Z') || name.starts_with('C') => {
            let n = parse_n(&name[1..])?;
            if n == 0 {
                return Err(Error::InvalidInput("cyclic order must be >= 1".into()));
            }
            Ok(cyclic(n))
        }
        _ if name.starts_with('D') => {
            let n = parse_n(&name[1..])?;
            if n == 0 {
                return Err(Error::InvalidInput("dihedral order must be >= 1".into()));
            }
            Ok(dihedral(n))
        }
        _ if name.starts_with('S') => {
            let n = parse_n(&name[1..])?;
            if !(1..=5).contains(&n) {
                return Err(Error::InvalidInput(
                    "symmetric groups supported for 1 <= n <= 5".into(),
                ));
            }
            Ok(symmetric(n))
        }
        _ => Err(Error::InvalidInput(format!("unknown builtin group `{name}`"))),
    }
}

impl FiniteGroup {
    fn from_table_unchecked_rename(mut g: FiniteGroup, name: String) -> Result<FiniteGroup> {
        g.name = name;
        Ok(g)
    }
}

// ---------------------------------------------------------------------------
// Locally compact group models and elements
// ---------------------------------------------------------------------------

/// A locally compact group model: finite, or Z×F with the Z factor central.
#[derive(Debug, Clone, PartialEq)]
pub struct LCGroup {
    finite: FiniteGroup,
    z_factor: bool,
}

/// A group element: the Z coordinate (always 0 for finite groups) and an
/// index into the finite part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem {
    pub z: i64,
    pub f: usize,
}

impl Elem {
    pub const fn finite(f: usize) -> Self {
        Elem { z: 0, f }
    }

    pub const fn z_cross(z: i64, f: usize) -> Self {
        Elem { z, f }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.z == 0 {
            write!(fm, "{}", self.f)
        } else {
            write!(fm, "{}:{}", self.z, self.f)
        }
    }
}

impl LCGroup {
    pub fn finite(g: FiniteGroup) -> Self {
        LCGroup {
            finite: g,
            z_factor: false,
        }
    }

    pub fn z_cross(f: FiniteGroup) -> Self {
        LCGroup {
            finite: f,
            z_factor: true,
        }
    }

    /// The finite part: the group itself (finite model) or F (Z×F model).
    pub fn finite_part(&self) -> &FiniteGroup {
        &self.finite
    }

    pub fn has_z_factor(&self) -> bool {
        self.z_factor
    }

    pub fn is_finite(&self) -> bool {
        !self.z_factor
    }

    /// Number of elements for the finite model, None for Z×F.
    pub fn order(&self) -> Option<usize> {
        (!self.z_factor).then_some(self.finite.order())
    }

    pub fn name(&self) -> String {
        if self.z_factor {
            format!("Zx{}", self.finite.name())
        } else {
            self.finite.name().to_string()
        }
    }

    pub fn identity(&self) -> Elem {
        Elem { z: 0, f: 0 }
    }

    pub fn contains(&self, e: Elem) -> bool {
        e.f < self.finite.order() && (self.z_factor || e.z == 0)
    }

    fn check(&self, e: Elem) -> Result<()> {
        if !self.contains(e) {
            return Err(Error::ElementOutOfRange {
                index: e.f,
                order: self.finite.order(),
            });
        }
        Ok(())
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.contains(a) && self.contains(b));
        Elem {
            z: a.z + b.z,
            f: self.finite.mul(a.f, b.f),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        debug_assert!(self.contains(a));
        Elem {
            z: -a.z,
            f: self.finite.inv(a.f),
        }
    }

    /// All elements, finite model only.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        assert!(self.is_finite(), "cannot enumerate Z x F");
        (0..self.finite.order()).map(Elem::finite)
    }
}

// ---------------------------------------------------------------------------
// External group description
// ---------------------------------------------------------------------------

/// JSON description of a group: an explicit Cayley table, a builtin name, or
/// a Z×F pairing (with the compact subgroup declared inside the finite part).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cayley {
        table: Vec<Vec<usize>>,
    },
    Builtin {
        name: String,
    },
    ZCross {
        finite: Box<GroupSpec>,
        #[serde(rename = "subgroupOfFinite")]
        subgroup_of_finite: Vec<usize>,
    },
}

/// Builds and validates a group from its description.
pub fn build_group(spec: &GroupSpec) -> Result<LCGroup> {
    match spec {
        GroupSpec::Cayley { table } => {
            Ok(LCGroup::finite(FiniteGroup::from_table(table.clone(), "cayley")?))
        }
        GroupSpec::Builtin { name } => Ok(LCGroup::finite(builtin(name)?)),
        GroupSpec::ZCross { finite, .. } => {
            let f = match build_group(finite)? {
                g if g.is_finite() => g.finite,
                _ => return Err(Error::InvalidInput("nested Z factors are not supported".into())),
            };
            Ok(LCGroup::z_cross(f))
        }
    }
}

/// The subgroup declared inside a `z_cross` description, if any.
pub fn declared_subgroup(spec: &GroupSpec) -> Option<&[usize]> {
    match spec {
        GroupSpec::ZCross {
            subgroup_of_finite, ..
        } => Some(subgroup_of_finite),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Compact normal subgroups
// ---------------------------------------------------------------------------

/// A validated compact normal subgroup K, carrying its own re-indexed group
/// structure and the normalized Haar measure ν with ν(K) = 1.
///
/// For the Z×F model the subgroup lives in {0}×F and is given by indices
/// into F; normality in Z×F reduces to normality in F because Z is central.
#[derive(Debug, Clone)]
pub struct CompactSubgroup {
    parent: Arc<LCGroup>,
    members: Vec<usize>,          // sorted indices into the finite part
    position: Vec<Option<usize>>, // finite-part index -> subgroup index
    group: Arc<FiniteGroup>,      // re-indexed Cayley table of K
}

impl CompactSubgroup {
    pub fn parent(&self) -> &Arc<LCGroup> {
        &self.parent
    }

    /// Sorted member indices into the finite part of the parent.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// K as an abstract finite group (elements re-indexed 0..|K|).
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Haar mass of a single point: ν({k}) = 1/|K|.
    pub fn nu_mass(&self) -> f64 {
        1.0 / self.members.len() as f64
    }

    /// Subgroup index of a finite-part element, if it belongs to K.
    pub fn position_of(&self, f_index: usize) -> Option<usize> {
        self.position.get(f_index).copied().flatten()
    }

    /// The k-th member as an element of the parent group.
    pub fn member_elem(&self, sub_index: usize) -> Elem {
        Elem::finite(self.members[sub_index])
    }

    pub fn contains_elem(&self, e: Elem) -> bool {
        e.z == 0 && self.position_of(e.f).is_some()
    }

    /// Whether this subgroup is the whole (finite) parent group.
    pub fn is_full(&self) -> bool {
        self.parent.is_finite() && self.members.len() == self.parent.finite_part().order()
    }
}

/// Validates that `members` (indices into the finite part of G) form a
/// subgroup that is normal in G, and attaches ν.
pub fn check_normal(parent: &Arc<LCGroup>, members: &[usize]) -> Result<CompactSubgroup> {
    let f = parent.finite_part();
    let n = f.order();
    if members.is_empty() {
        return Err(Error::NotSubgroup {
            witness: 0,
            reason: "empty subset".into(),
        });
    }
    let mut sorted: Vec<usize> = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &m in &sorted {
        if m >= n {
            return Err(Error::ElementOutOfRange { index: m, order: n });
        }
    }
    let mut position = vec![None; n];
    for (i, &m) in sorted.iter().enumerate() {
        position[m] = Some(i);
    }
    if position[0].is_none() {
        return Err(Error::NotSubgroup {
            witness: 0,
            reason: "identity missing".into(),
        });
    }
    for &a in &sorted {
        if position[f.inv(a)].is_none() {
            return Err(Error::NotSubgroup {
                witness: a,
                reason: "inverse missing".into(),
            });
        }
        for &b in &sorted {
            if position[f.mul(a, b)].is_none() {
                return Err(Error::NotSubgroup {
                    witness: f.mul(a, b),
                    reason: format!("product {a}·{b} leaves the subset"),
                });
            }
        }
    }
    // normality: g k g⁻¹ ∈ K for all g in the finite part (exhaustive); for
    // the Z×F model the Z coordinate is central and drops out.
    for g in 0..n {
        for &k in &sorted {
            let conj = f.mul(f.mul(g, k), f.inv(g));
            if position[conj].is_none() {
                return Err(Error::NotNormal { g, k });
            }
        }
    }
    // re-indexed Cayley table of K
    let table: Vec<Vec<usize>> = sorted
        .iter()
        .map(|&a| {
            sorted
                .iter()
                .map(|&b| position[f.mul(a, b)].expect("closure checked"))
                .collect()
        })
        .collect();
    let name = if sorted.len() == n && parent.is_finite() {
        f.name().to_string()
    } else {
        format!("{}[{}]", f.name(), sorted.len())
    };
    let group = Arc::new(FiniteGroup::from_table(table, name)?);
    Ok(CompactSubgroup {
        parent: Arc::clone(parent),
        members: sorted,
        position,
        group,
    })
}

// ---------------------------------------------------------------------------
// Coset spaces and Haar data
// ---------------------------------------------------------------------------

/// Identifier of a left K-coset: the Z coordinate and the finite-part coset
/// index (z is always 0 for finite groups).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CosetId {
    pub z: i64,
    pub c: usize,
}

impl CosetId {
    pub const fn finite(c: usize) -> Self {
        CosetId { z: 0, c }
    }
}

impl fmt::Display for CosetId {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.z == 0 {
            write!(fm, "{}", self.c)
        } else {
            write!(fm, "{}:{}", self.z, self.c)
        }
    }
}

/// The space of left K-cosets with its G-invariant measure μ (mass 1 per
/// coset) and the deterministic factorization g = rep(c)·k.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    parent: Arc<LCGroup>,
    subgroup: Arc<CompactSubgroup>,
    reps_f: Vec<usize>,      // smallest finite-part index per coset
    coset_of_f: Vec<usize>,  // finite-part index -> coset index
}

impl CosetSpace {
    pub fn parent(&self) -> &Arc<LCGroup> {
        &self.parent
    }

    pub fn subgroup(&self) -> &Arc<CompactSubgroup> {
        &self.subgroup
    }

    /// Number of cosets in the finite part (the full coset count for finite
    /// G; for Z×F the coset space is Z × this).
    pub fn finite_coset_count(&self) -> usize {
        self.reps_f.len()
    }

    /// Mass of a single coset under μ.
    pub fn mu_mass(&self) -> f64 {
        1.0
    }

    /// λ point mass: μ(coset)·ν(point) = 1/|K|.
    pub fn lambda_mass(&self) -> f64 {
        self.subgroup.nu_mass()
    }

    pub fn haar(&self) -> HaarData {
        HaarData {
            point_mass: self.lambda_mass(),
            total: self
                .parent
                .is_finite()
                .then_some(self.reps_f.len() as f64),
        }
    }

    pub fn coset_of(&self, g: Elem) -> CosetId {
        CosetId {
            z: g.z,
            c: self.coset_of_f[g.f],
        }
    }

    pub fn rep(&self, c: CosetId) -> Elem {
        Elem {
            z: c.z,
            f: self.reps_f[c.c],
        }
    }

    /// Unique factorization g = rep(c)·k with k ∈ K; returns (c, subgroup
    /// index of k).
    pub fn factor(&self, g: Elem) -> (CosetId, usize) {
        let c = self.coset_of(g);
        let f = self.parent.finite_part();
        let k_f = f.mul(f.inv(self.reps_f[c.c]), g.f);
        let k = self
            .subgroup
            .position_of(k_f)
            .expect("factorization lands in K");
        (c, k)
    }

    /// Cosets of the finite model.
    pub fn cosets(&self) -> impl Iterator<Item = CosetId> + '_ {
        assert!(self.parent.is_finite(), "cannot enumerate cosets of Z x F");
        (0..self.reps_f.len()).map(CosetId::finite)
    }
}

/// λ as data: constant point mass and, for finite G, the total λ(G) = |G/K|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HaarData {
    #[serde(rename = "pointMass")]
    pub point_mass: f64,
    pub total: Option<f64>,
}

/// Builds the left coset space of K in G with deterministic representatives
/// (smallest finite-part index per coset).
pub fn coset_space(parent: &Arc<LCGroup>, subgroup: &Arc<CompactSubgroup>) -> CosetSpace {
    let f = parent.finite_part();
    let n = f.order();
    let mut coset_of_f = vec![usize::MAX; n];
    let mut reps_f = Vec::new();
    for g in 0..n {
        if coset_of_f[g] != usize::MAX {
            continue;
        }
        let c = reps_f.len();
        reps_f.push(g);
        for &k in subgroup.members() {
            coset_of_f[f.mul(g, k)] = c;
        }
    }
    let cs = CosetSpace {
        parent: Arc::clone(parent),
        subgroup: Arc::clone(subgroup),
        reps_f,
        coset_of_f,
    };
    // Factorization is a bijection: rep(c)·k over all (c, k) hits every
    // finite-part element exactly once.
    debug_assert!({
        let mut seen = vec![false; n];
        for &r in &cs.reps_f {
            for &k in subgroup.members() {
                let g = f.mul(r, k);
                assert!(!seen[g], "factorization not injective");
                seen[g] = true;
            }
        }
        seen.into_iter().all(|s| s)
    });
    cs
}

// ---------------------------------------------------------------------------
// Finitely supported scalar functions and the Weil formula
// ---------------------------------------------------------------------------

/// A finitely supported complex function on G.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScalarFn {
    pub atoms: BTreeMap<Elem, Complex64>,
}

impl ScalarFn {
    pub fn new() -> Self {
        ScalarFn::default()
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = (Elem, Complex64)>) -> Self {
        ScalarFn {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn value(&self, g: Elem) -> Complex64 {
        self.atoms.get(&g).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// Both evaluation orders of the Haar integral ∫_G f dλ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeilCheck {
    /// Direct sum Σ_g f(g)·λ({g}).
    pub direct: (f64, f64),
    /// Iterated sum Σ_cosets μ(c)·Σ_K f(rep(c)·k)·ν(k).
    pub iterated: (f64, f64),
}

impl WeilCheck {
    pub fn gap(&self) -> f64 {
        let d = Complex64::new(self.direct.0, self.direct.1);
        let i = Complex64::new(self.iterated.0, self.iterated.1);
        (d - i).norm()
    }
}

/// Evaluates ∫_G f dλ directly and through the coset disintegration; both
/// values are returned for comparison. f must be finitely supported, which
/// is automatic here since it is given by its atoms.
pub fn weil_integrate(f: &ScalarFn, cosets: &CosetSpace) -> Result<WeilCheck> {
    let g = cosets.parent();
    for e in f.atoms.keys() {
        g.check(*e)?;
    }
    let lambda = cosets.lambda_mass();
    let nu = cosets.subgroup().nu_mass();
    let direct: Complex64 = f.atoms.values().map(|v| v * lambda).sum();

    // Cosets meeting the support.
    let mut support_cosets: Vec<CosetId> = f.atoms.keys().map(|&e| cosets.coset_of(e)).collect();
    support_cosets.sort_unstable();
    support_cosets.dedup();
    let mut iterated = Complex64::new(0.0, 0.0);
    for c in support_cosets {
        let rep = cosets.rep(c);
        let mut over_k = Complex64::new(0.0, 0.0);
        for sub_idx in 0..cosets.subgroup().order() {
            let k = cosets.subgroup().member_elem(sub_idx);
            over_k += f.value(g.mul(rep, k)) * nu;
        }
        iterated += cosets.mu_mass() * over_k;
    }
    Ok(WeilCheck {
        direct: (direct.re, direct.im),
        iterated: (iterated.re, iterated.im),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_group_is_valid() {
        let g = cyclic(1);
        assert_eq!(g.order(), 1);
        assert_eq!(g.mul(0, 0), 0);
    }

    #[test]
    fn symmetric_3_matches_permutation_composition_oracle() {
        // Independent oracle: recompute every product by composing the
        // permutation arrays directly.
        let g = symmetric(3);
        assert_eq!(g.order(), 6);
        let perms = permutations_lex(3);
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let composed = compose_perms(pa, pb);
                let expect = perms.iter().position(|p| *p == composed).unwrap();
                assert_eq!(g.mul(a, b), expect, "product {a}·{b}");
            }
        }
        assert!(!g.is_abelian());
    }

    #[test]
    fn broken_table_reports_no_inverse() {
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], "bad").unwrap_err();
        assert_eq!(err, Error::NoInverse { element: 1 });
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // identity row/column and inverses fine, associativity broken
        let table = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let mut bad = table;
        bad[1][1] = 0;
        bad[1][2] = 2;
        let err = FiniteGroup::from_table(bad, "bad").unwrap_err();
        assert!(matches!(
            err,
            Error::NonAssociative { .. } | Error::NoInverse { .. }
        ));
    }

    #[test]
    fn inverse_antihomomorphism() {
        for g in [cyclic(6), dihedral(4), symmetric(3), quaternion8()] {
            for a in 0..g.order() {
                for b in 0..g.order() {
                    assert_eq!(g.inv(g.mul(a, b)), g.mul(g.inv(b), g.inv(a)));
                }
            }
        }
    }

    #[test]
    fn builtin_names_parse() {
        assert_eq!(builtin("Z4").unwrap().order(), 4);
        assert_eq!(builtin("D4").unwrap().order(), 8);
        assert_eq!(builtin("S4").unwrap().order(), 24);
        assert_eq!(builtin("Q8").unwrap().order(), 8);
        assert_eq!(builtin("Z2xZ2").unwrap().order(), 4);
        assert!(builtin("S9").is_err());
        assert!(builtin("X3").is_err());
    }

    fn s3_with_a3() -> (Arc<LCGroup>, Arc<CompactSubgroup>) {
        let g = Arc::new(LCGroup::finite(symmetric(3)));
        let a3 = g.finite_part().squares_subgroup();
        let k = Arc::new(check_normal(&g, &a3).unwrap());
        (g, k)
    }

    #[test]
    fn a3_is_normal_of_index_two() {
        let (_, k) = s3_with_a3();
        assert_eq!(k.order(), 3);
        assert_eq!(k.members(), &[0, 3, 4]); // identity and the two 3-cycles
    }

    #[test]
    fn reflection_pair_is_not_normal_in_s3() {
        let g = Arc::new(LCGroup::finite(symmetric(3)));
        // {e, (01)} -> lex index of [1,0,2] is 2
        let err = check_normal(&g, &[0, 2]).unwrap_err();
        match err {
            Error::NotNormal { g: gg, k } => {
                // verify the witness: gg·k·gg⁻¹ really leaves the subset
                let f = g.finite_part();
                let conj = f.mul(f.mul(gg, k), f.inv(gg));
                assert!(conj != 0 && conj != 2);
            }
            other => panic!("expected NotNormal, got {other:?}"),
        }
    }

    #[test]
    fn trivial_subgroup_is_normal() {
        let g = Arc::new(LCGroup::finite(dihedral(4)));
        let k = check_normal(&g, &[0]).unwrap();
        assert_eq!(k.order(), 1);
        assert_eq!(k.nu_mass(), 1.0);
    }

    #[test]
    fn coset_spaces_enumerate_as_expected() {
        let (g, k) = s3_with_a3();
        let cs = coset_space(&g, &k);
        assert_eq!(cs.finite_coset_count(), 2);
        assert_eq!(cs.rep(CosetId::finite(0)), Elem::finite(0));
        assert_eq!(cs.rep(CosetId::finite(1)), Elem::finite(1)); // smallest odd permutation

        let z4 = Arc::new(LCGroup::finite(cyclic(4)));
        let k2 = Arc::new(check_normal(&z4, &[0, 2]).unwrap());
        let cs2 = coset_space(&z4, &k2);
        assert_eq!(cs2.finite_coset_count(), 2);
        assert_eq!(cs2.coset_of(Elem::finite(2)).c, 0);
        assert_eq!(cs2.coset_of(Elem::finite(3)).c, 1);

        let full = Arc::new(check_normal(&z4, &[0, 1, 2, 3]).unwrap());
        let cs3 = coset_space(&z4, &full);
        assert_eq!(cs3.finite_coset_count(), 1);
        assert_eq!(cs3.rep(CosetId::finite(0)), z4.identity());
    }

    #[test]
    fn coset_action_permutes_cosets() {
        let (g, k) = s3_with_a3();
        let cs = coset_space(&g, &k);
        for t in g.elements() {
            let mut hit = vec![false; cs.finite_coset_count()];
            for c in cs.cosets() {
                let moved = cs.coset_of(g.mul(t, cs.rep(c)));
                assert!(!hit[moved.c]);
                hit[moved.c] = true;
            }
            assert!(hit.into_iter().all(|h| h));
        }
    }

    #[test]
    fn weil_zero_function() {
        let (g, k) = s3_with_a3();
        let cs = coset_space(&g, &k);
        let w = weil_integrate(&ScalarFn::new(), &cs).unwrap();
        assert_eq!(w.direct, (0.0, 0.0));
        assert_eq!(w.iterated, (0.0, 0.0));
    }

    #[test]
    fn weil_indicator_of_k_has_mass_one() {
        let (g, k) = s3_with_a3();
        let cs = coset_space(&g, &k);
        let f = ScalarFn::from_atoms(k.members().iter().map(|&m| (Elem::finite(m), c64(1.0, 0.0))));
        let w = weil_integrate(&f, &cs).unwrap();
        assert!((w.direct.0 - 1.0).abs() < 1e-15);
        assert!(w.gap() < 1e-15);
    }

    #[test]
    fn weil_agrees_on_z_cross_f() {
        let f2 = cyclic(2);
        let g = Arc::new(LCGroup::z_cross(f2));
        let k = Arc::new(check_normal(&g, &[0, 1]).unwrap());
        let cs = coset_space(&g, &k);
        let f = ScalarFn::from_atoms([
            (Elem::z_cross(-3, 1), c64(1.5, -0.5)),
            (Elem::z_cross(0, 0), c64(0.25, 2.0)),
            (Elem::z_cross(7, 0), c64(-1.0, 0.0)),
        ]);
        let w = weil_integrate(&f, &cs).unwrap();
        assert!(w.gap() < 1e-12, "gap {}", w.gap());
        // direct value: (1.5-0.5i + 0.25+2i - 1)/2
        assert!((w.direct.0 - 0.375).abs() < 1e-15);
        assert!((w.direct.1 - 0.75).abs() < 1e-15);
    }

    #[test]
    fn generated_subgroups_and_center() {
        let d4 = dihedral(4);
        assert_eq!(d4.center(), vec![0, 2]);
        assert_eq!(d4.generated_subgroup(&[1]), vec![0, 1, 2, 3]);
        let s4 = symmetric(4);
        let a4 = s4.squares_subgroup();
        assert_eq!(a4.len(), 12);
        let s3 = symmetric(3);
        assert_eq!(s3.squares_subgroup().len(), 3);
    }

    #[test]
    fn z_cross_products_behave_componentwise() {
        let g = LCGroup::z_cross(cyclic(3));
        let a = Elem::z_cross(2, 1);
        let b = Elem::z_cross(-5, 2);
        assert_eq!(g.mul(a, b), Elem::z_cross(-3, 0));
        assert_eq!(g.inv(a), Elem::z_cross(-2, 2));
        assert_eq!(g.identity(), Elem::z_cross(0, 0));
    }

    #[test]
    fn group_spec_roundtrip() {
        let spec: GroupSpec = serde_json::from_str(r#"{"kind":"builtin","name":"S3"}"#).unwrap();
        let g = build_group(&spec).unwrap();
        assert_eq!(g.order(), Some(6));

        let spec: GroupSpec =
            serde_json::from_str(r#"{"kind":"cayley","table":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(build_group(&spec).unwrap().order(), Some(2));

        let spec: GroupSpec = serde_json::from_str(
            r#"{"kind":"z_cross","finite":{"kind":"builtin","name":"Z2"},"subgroupOfFinite":[0,1]}"#,
        )
        .unwrap();
        let g = build_group(&spec).unwrap();
        assert!(g.has_z_factor());
        assert_eq!(declared_subgroup(&spec), Some(&[0usize, 1][..]));

        // unknown fields rejected
        assert!(serde_json::from_str::<GroupSpec>(
            r#"{"kind":"builtin","name":"S3","extra":1}"#
        )
        .is_err());
    }
}
