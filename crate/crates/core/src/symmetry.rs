//! Diagonal symmetry groups, their extension to the p-coordinates, and the
//! elements with nonempty fixed locus.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{
    frac_mod_one, lcm_all, smith_normal_form, solve_congruences, ArithError, IntMatrix, Rational,
};
use crate::polycore::{ModelData, Poly};

pub const DEFAULT_MAX_GROUP_ORDER: usize = 1_000_000;

/// Enumeration cap, from `LG_MAX_GROUP_ORDER` when set.
pub fn group_order_cap() -> usize {
    std::env::var("LG_MAX_GROUP_ORDER")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP_ORDER)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error(
        "phases do not define a symmetry: monomials of polynomial {poly} have different phases"
    )]
    NotASymmetry { poly: usize },
    #[error("group order exceeds the cap of {cap}")]
    GroupTooLarge { cap: usize },
    #[error("model is not Calabi-Yau; the determinant is not constant on torus cosets")]
    NotCalabiYau,
    #[error("symmetry group has {0} continuous directions; only the torus is supported")]
    ExtraContinuousSymmetries(usize),
    #[error("expected {expected} phases, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A diagonal symmetry as phases on the n x-coordinates then the r
/// p-coordinates, each reduced into [0, 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement {
    n: usize,
    phases: Vec<Rational>,
}

impl GroupElement {
    pub fn new(x: Vec<Rational>, p: Vec<Rational>) -> Self {
        let n = x.len();
        let phases = x.into_iter().chain(p).map(|q| frac_mod_one(&q)).collect();
        GroupElement { n, phases }
    }

    pub fn identity(n: usize, r: usize) -> Self {
        GroupElement {
            n,
            phases: vec![Rational::zero(); n + r],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.phases.len() - self.n
    }

    pub fn phases(&self) -> &[Rational] {
        &self.phases
    }

    pub fn x_phases(&self) -> &[Rational] {
        &self.phases[..self.n]
    }

    pub fn p_phases(&self) -> &[Rational] {
        &self.phases[self.n..]
    }

    pub fn phase(&self, j: usize) -> &Rational {
        &self.phases[j]
    }

    pub fn is_identity(&self) -> bool {
        self.phases.iter().all(|q| q.is_zero())
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            n: self.n,
            phases: self
                .phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| frac_mod_one(&(a + b)))
                .collect(),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            n: self.n,
            phases: self.phases.iter().map(|a| frac_mod_one(&-a)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> GroupElement {
        let f = Rational::from_integer(BigInt::from(k));
        GroupElement {
            n: self.n,
            phases: self
                .phases
                .iter()
                .map(|a| frac_mod_one(&(a * &f)))
                .collect(),
        }
    }

    /// Multiplies by the torus element with parameter t.
    pub fn twist(&self, t: &Rational, torus: &[i64]) -> GroupElement {
        GroupElement {
            n: self.n,
            phases: self
                .phases
                .iter()
                .zip(torus)
                .map(|(a, &w)| frac_mod_one(&(a + t * Rational::from_integer(BigInt::from(w)))))
                .collect(),
        }
    }

    /// Least common denominator of the phases.
    pub fn denominator(&self) -> BigInt {
        lcm_all(self.phases.iter().map(|q| q.denom()))
    }

    pub fn order(&self) -> u64 {
        self.denominator().to_u64().unwrap_or(u64::MAX)
    }

    /// Sum of all n+r phases.
    pub fn age(&self) -> Rational {
        self.phases.iter().sum()
    }

    /// Numerators over `den`, which must be a multiple of every denominator.
    pub fn numerators(&self, den: &BigInt) -> Vec<BigInt> {
        self.phases
            .iter()
            .map(|q| q.numer() * (den / q.denom()))
            .collect()
    }

    /// `(a,b,c;d)/den` using the element's own denominator.
    pub fn label(&self) -> String {
        self.label_over(&self.denominator())
    }

    pub fn label_over(&self, den: &BigInt) -> String {
        let nums = self.numerators(den);
        let join = |v: &[BigInt]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let body = format!("({};{})", join(&nums[..self.n]), join(&nums[self.n..]));
        if den.is_one() {
            body
        } else {
            format!("{body}/{den}")
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Phase of each W_i under the x-phases, or the first polynomial on which
/// the monomials disagree.
pub fn polynomial_phases(
    x: &[Rational],
    model: &ModelData,
) -> Result<Vec<Rational>, SymmetryError> {
    if x.len() != model.n() {
        return Err(SymmetryError::WrongLength {
            expected: model.n(),
            got: x.len(),
        });
    }
    model
        .polys
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let mut common: Option<Rational> = None;
            for (m, _) in w.terms() {
                let ph = frac_mod_one(
                    &m.x.iter()
                        .zip(x)
                        .map(|(&e, a)| a * Rational::from_integer(BigInt::from(e)))
                        .sum::<Rational>(),
                );
                match &common {
                    None => common = Some(ph),
                    Some(c) if *c != ph => return Err(SymmetryError::NotASymmetry { poly: i + 1 }),
                    _ => {}
                }
            }
            Ok(common.unwrap_or_else(Rational::zero))
        })
        .collect()
}

/// Adds p-phases `-b_i` so that `sum p_i W_i` is invariant.
pub fn extend_to_p(x: &[Rational], model: &ModelData) -> Result<GroupElement, SymmetryError> {
    let b = polynomial_phases(x, model)?;
    Ok(GroupElement::new(
        x.to_vec(),
        b.into_iter().map(|q| -q).collect(),
    ))
}

/// Phases `w_j / gcd(d)` on the x-coordinates.
pub fn element_j(model: &ModelData) -> GroupElement {
    let d = BigInt::from(model.degree_gcd().max(1));
    let x: Vec<Rational> = model
        .weights
        .iter()
        .map(|&w| Rational::new(BigInt::from(w), d.clone()))
        .collect();
    extend_to_p(&x, model).expect("J is a symmetry of quasi-homogeneous polynomials")
}

/// Sum of all n+r phases, mod 1.
pub fn determinant_phase(g: &GroupElement) -> Rational {
    frac_mod_one(&g.age())
}

/// A group `Γ₀·G`: the torus together with finitely many diagonal
/// generators. Elements are enumerated as canonical representatives of the
/// cosets of the torus.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    pub name: String,
    pub generators: Vec<GroupElement>,
    pub contains_torus: bool,
    torus: Vec<i64>,
    elements: Vec<GroupElement>,
    modulus: BigInt,
}

impl SymmetryGroup {
    /// Closure of `generators` modulo the torus with weights `torus`.
    pub fn generate(
        name: impl Into<String>,
        n: usize,
        generators: Vec<GroupElement>,
        torus: Vec<i64>,
        cap: usize,
    ) -> Result<Self, SymmetryError> {
        let r = torus.len() - n;
        let id = GroupElement::identity(n, r);
        let canon: Vec<GroupElement> = generators
            .iter()
            .map(|g| canonical_rep(g, &torus))
            .collect();
        let mut seen: HashSet<GroupElement> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(cur) = queue.pop_front() {
            for g in &canon {
                let next = canonical_rep(&cur.compose(g), &torus);
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return Err(SymmetryError::GroupTooLarge { cap });
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<GroupElement> = seen.into_iter().collect();
        elements.sort();
        let modulus = lcm_all(
            elements
                .iter()
                .map(|e| e.denominator())
                .collect::<Vec<_>>()
                .iter(),
        );
        Ok(SymmetryGroup {
            name: name.into(),
            generators,
            contains_torus: true,
            torus,
            elements,
            modulus,
        })
    }

    /// Canonical coset representatives, sorted.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Order of the quotient by the torus.
    pub fn order_mod_torus(&self) -> usize {
        self.elements.len()
    }

    pub fn torus_weights(&self) -> &[i64] {
        &self.torus
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements
            .binary_search(&canonical_rep(g, &self.torus))
            .is_ok()
    }
}

/// Representative of `g·Γ₀` with first x-phase 0, least among the finitely
/// many choices.
pub fn canonical_rep(g: &GroupElement, torus: &[i64]) -> GroupElement {
    let Some(j) = torus.iter().position(|&w| w != 0) else {
        return g.clone();
    };
    let w = torus[j];
    let aw = w.unsigned_abs() as i64;
    let wq = Rational::from_integer(BigInt::from(w));
    (0..aw)
        .map(|m| {
            let t = (Rational::from_integer(BigInt::from(m)) - g.phase(j)) / &wq;
            g.twist(&t, torus)
        })
        .min()
        .expect("torus weight is nonzero")
}

fn difference_matrix(model: &ModelData) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for w in &model.polys {
        let monos: Vec<_> = w.terms().map(|(m, _)| m.clone()).collect();
        if let Some(first) = monos.first() {
            for m in &monos[1..] {
                rows.push(
                    m.x.iter()
                        .zip(&first.x)
                        .map(|(&a, &b)| a as i64 - b as i64)
                        .collect(),
                );
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![0; model.n()]);
    }
    IntMatrix::from_rows(&rows).expect("rows have length n")
}

/// Γ_max modulo the torus: all diagonal x-phases under which each W_i is
/// homogeneous, extended to the p-coordinates.
pub fn maximal_group(model: &ModelData) -> Result<SymmetryGroup, SymmetryError> {
    let a = difference_matrix(model);
    let snf = smith_normal_form(&a);
    let factors = snf.invariant_factors();
    let rank = factors.iter().filter(|f| !f.is_zero()).count();
    let continuous = model.n() - rank;
    if continuous > 1 {
        return Err(SymmetryError::ExtraContinuousSymmetries(continuous));
    }
    let m = factors
        .iter()
        .filter(|f| !f.is_zero())
        .fold(BigInt::one(), |acc, f| acc.lcm(f));
    let zero = vec![BigInt::zero(); a.rows()];
    let sol = solve_congruences(&a, &zero, &m)?;
    let mut gens = Vec::new();
    for g in &sol.generators {
        let x: Vec<Rational> = g
            .iter()
            .map(|v| Rational::new(v.clone(), m.clone()))
            .collect();
        gens.push(extend_to_p(&x, model)?);
    }
    SymmetryGroup::generate(
        "MAX",
        model.n(),
        gens,
        model.torus_weights(),
        group_order_cap(),
    )
}

/// Γ₀·⟨J⟩.
pub fn j_group(model: &ModelData) -> Result<SymmetryGroup, SymmetryError> {
    SymmetryGroup::generate(
        "J",
        model.n(),
        vec![element_j(model)],
        model.torus_weights(),
        group_order_cap(),
    )
}

/// Elements of `g` with extended determinant 1.
pub fn sl_subgroup(g: &SymmetryGroup, model: &ModelData) -> Result<SymmetryGroup, SymmetryError> {
    if !model.is_calabi_yau() {
        return Err(SymmetryError::NotCalabiYau);
    }
    let cap = group_order_cap();
    if g.order_mod_torus() > cap {
        return Err(SymmetryError::GroupTooLarge { cap });
    }
    let n = model.n();
    let members: Vec<GroupElement> = g
        .elements()
        .iter()
        .filter(|e| determinant_phase(e).is_zero())
        .cloned()
        .collect();
    // greedy generating set: keep an element only if not already generated
    let mut gens: Vec<GroupElement> = Vec::new();
    let mut span = SymmetryGroup::generate("SL", n, vec![], g.torus.clone(), cap)?;
    for e in &members {
        if !span.contains(e) {
            gens.push(e.clone());
            span = SymmetryGroup::generate("SL", n, gens.clone(), g.torus.clone(), cap)?;
        }
    }
    debug_assert_eq!(span.order_mod_torus(), members.len());
    span.name = "SL".into();
    Ok(span)
}

/// The group selected by a model's group selector.
pub fn selected_group(model: &ModelData) -> Result<SymmetryGroup, SymmetryError> {
    use crate::polycore::GroupSelector;
    match &model.group {
        GroupSelector::J => j_group(model),
        GroupSelector::Max => maximal_group(model),
        GroupSelector::SL => sl_subgroup(&maximal_group(model)?, model),
        GroupSelector::Generators(specs) => {
            let mut gens = vec![element_j(model)];
            for s in specs {
                let ext = extend_to_p(&s.x, model)?;
                if let Some(p) = &s.p {
                    if p.len() != model.r() {
                        return Err(SymmetryError::WrongLength {
                            expected: model.r(),
                            got: p.len(),
                        });
                    }
                    let given: Vec<Rational> = p.iter().map(frac_mod_one).collect();
                    if given != ext.p_phases() {
                        return Err(SymmetryError::NotASymmetry { poly: 0 });
                    }
                }
                gens.push(ext);
            }
            SymmetryGroup::generate(
                "GEN",
                model.n(),
                gens,
                model.torus_weights(),
                group_order_cap(),
            )
        }
    }
}

/// Fixed-locus data of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedData {
    pub element: GroupElement,
    pub fixed_x: Vec<usize>,
    pub fixed_p: Vec<usize>,
    pub n_gamma: usize,
    pub r_gamma: usize,
    pub age: Rational,
}

impl FixedData {
    pub fn of(element: GroupElement) -> Self {
        let n = element.n();
        let fixed_x: Vec<usize> = (0..n).filter(|&j| element.phase(j).is_zero()).collect();
        let fixed_p: Vec<usize> = (0..element.r())
            .filter(|&i| element.phase(n + i).is_zero())
            .collect();
        FixedData {
            n_gamma: fixed_x.len(),
            r_gamma: fixed_p.len(),
            age: element.age(),
            fixed_x,
            fixed_p,
            element,
        }
    }

    /// Mask over all n+r coordinates.
    pub fn fixed_mask(&self) -> Vec<bool> {
        let n = self.element.n();
        let mut mask = vec![false; n + self.element.r()];
        for &j in &self.fixed_x {
            mask[j] = true;
        }
        for &i in &self.fixed_p {
            mask[n + i] = true;
        }
        mask
    }

    /// Combined indices of the fixed coordinates.
    pub fn fixed_coords(&self) -> Vec<usize> {
        let n = self.element.n();
        self.fixed_x
            .iter()
            .copied()
            .chain(self.fixed_p.iter().map(|i| n + i))
            .collect()
    }

    pub fn age_integer(&self) -> Option<i64> {
        if self.age.is_integer() {
            self.age.to_integer().to_i64()
        } else {
            None
        }
    }
}

/// All elements of `Γ₀·G` fixing at least one coordinate.
///
/// For each coset representative and each coordinate j, the torus parameter
/// t must satisfy `g_j + t·wt_j ≡ 0`, which has `|wt_j|` solutions mod 1.
pub fn relevant_elements(g: &SymmetryGroup) -> Result<Vec<FixedData>, SymmetryError> {
    let cap = group_order_cap();
    let torus = &g.torus;
    let found: Vec<Vec<GroupElement>> = g
        .elements()
        .par_iter()
        .map(|rep| {
            let mut out = Vec::new();
            for (j, &w) in torus.iter().enumerate() {
                if w == 0 {
                    if rep.phase(j).is_zero() {
                        out.push(rep.clone());
                    }
                    continue;
                }
                let wq = Rational::from_integer(BigInt::from(w));
                for m in 0..w.unsigned_abs() as i64 {
                    let t = (Rational::from_integer(BigInt::from(m)) - rep.phase(j)) / &wq;
                    out.push(rep.twist(&t, torus));
                }
            }
            out
        })
        .collect();
    let mut set: BTreeSet<GroupElement> = BTreeSet::new();
    for batch in found {
        set.extend(batch);
        if set.len() > cap {
            return Err(SymmetryError::GroupTooLarge { cap });
        }
    }
    let mut out: Vec<FixedData> = set.into_iter().map(FixedData::of).collect();
    out.sort_by(|a, b| a.age.cmp(&b.age).then_with(|| a.element.cmp(&b.element)));
    Ok(out)
}

/// Permutations of the x-coordinates mapping every W_i to itself.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    perms: Vec<Vec<usize>>,
}

impl PermutationGroup {
    /// Brute force over all n! permutations; only the identity beyond n = 9.
    pub fn of_model(model: &ModelData) -> Self {
        let n = model.n();
        let id: Vec<usize> = (0..n).collect();
        if n > 9 {
            return PermutationGroup { perms: vec![id] };
        }
        let mut perms = Vec::new();
        let mut cur = id;
        loop {
            if model.polys.iter().all(|w| permute_poly(w, &cur) == *w) {
                perms.push(cur.clone());
            }
            if !next_permutation(&mut cur) {
                break;
            }
        }
        PermutationGroup { perms }
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Image of g: the phase at position j moves to position perm[j].
    pub fn apply(perm: &[usize], g: &GroupElement) -> GroupElement {
        let n = g.n();
        let mut x = vec![Rational::zero(); n];
        for (j, &pj) in perm.iter().enumerate() {
            x[pj] = g.phase(j).clone();
        }
        GroupElement::new(x, g.p_phases().to_vec())
    }

    /// The least element in the orbit of g.
    pub fn orbit_type(&self, g: &GroupElement) -> GroupElement {
        self.perms
            .iter()
            .map(|p| Self::apply(p, g))
            .min()
            .unwrap_or_else(|| g.clone())
    }

    pub fn orbit(&self, g: &GroupElement) -> Vec<GroupElement> {
        let set: BTreeSet<GroupElement> = self.perms.iter().map(|p| Self::apply(p, g)).collect();
        set.into_iter().collect()
    }
}

fn permute_poly(w: &Poly, perm: &[usize]) -> Poly {
    Poly::from_terms(
        w.n(),
        w.r(),
        w.terms().map(|(m, c)| {
            let mut mm = m.clone();
            for (j, &pj) in perm.iter().enumerate() {
                mm.x[pj] = m.x[j];
            }
            (c.clone(), mm)
        }),
    )
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Type keys with multiplicities, ordered by first appearance in `elements`.
pub fn orbit_types(perms: &PermutationGroup, elements: &[FixedData]) -> Vec<(GroupElement, usize)> {
    let mut out: Vec<(GroupElement, usize)> = Vec::new();
    let mut index: std::collections::HashMap<GroupElement, usize> =
        std::collections::HashMap::new();
    for fd in elements {
        let key = perms.orbit_type(&fd.element);
        match index.get(&key) {
            Some(&i) => out[i].1 += 1,
            None => {
                index.insert(key.clone(), out.len());
                out.push((key, 1));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::polycore::{parse_polynomial, GroupSelector, VarTable};

    pub(crate) fn lt() -> ModelData {
        let v = VarTable::with_default_p(
            ["x1", "x2", "x3", "X1", "X2", "X3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            2,
        );
        let xo = v.x_only();
        let w1 = parse_polynomial("x1^3 + x2^3 + x3^3 - 3*X1*X2*X3", &xo).unwrap();
        let w2 = parse_polynomial("X1^3 + X2^3 + X3^3 - 3*x1*x2*x3", &xo).unwrap();
        ModelData::new("lt", v, vec![1; 6], vec![w1, w2], None, GroupSelector::J).unwrap()
    }

    fn quintic() -> ModelData {
        let v = VarTable::with_default_p((1..=5).map(|i| format!("x{i}")).collect(), 1);
        let w = parse_polynomial("x1^5+x2^5+x3^5+x4^5+x5^5", &v.x_only()).unwrap();
        ModelData::new("quintic", v, vec![1; 5], vec![w], None, GroupSelector::J).unwrap()
    }

    fn conic() -> ModelData {
        let v = VarTable::with_default_p(vec!["x".into(), "y".into()], 1);
        let w = parse_polynomial("x^2 + y^2", &v.x_only()).unwrap();
        ModelData::new("conic", v, vec![1, 1], vec![w], None, GroupSelector::Max).unwrap()
    }

    fn ninths(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&a| rat(a, 9)).collect()
    }

    #[test]
    fn j_elements() {
        let j = element_j(&lt());
        assert_eq!(j.x_phases(), vec![rat(1, 3); 6].as_slice());
        assert_eq!(j.p_phases(), &[rat(0, 1), rat(0, 1)]);
        assert_eq!(j.order(), 3);
        let jq = element_j(&quintic());
        assert_eq!(jq.x_phases(), vec![rat(1, 5); 5].as_slice());
        assert_eq!(jq.order(), 5);
        let j2 = element_j(&conic());
        assert_eq!(j2.x_phases(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(j2.p_phases(), &[rat(0, 1)]);
    }

    #[test]
    fn extension() {
        let m = lt();
        let g = extend_to_p(&ninths(&[2, 2, 5, 6, 3, 6]), &m).unwrap();
        assert_eq!(g.p_phases(), &[rat(3, 9), rat(0, 1)]);
        let z = extend_to_p(&ninths(&[0; 6]), &m).unwrap();
        assert!(z.is_identity());
        let bad = extend_to_p(
            &[
                rat(1, 3),
                rat(0, 1),
                rat(0, 1),
                rat(0, 1),
                rat(0, 1),
                rat(0, 1),
            ],
            &m,
        );
        // W1 keeps a common phase; x1*x2*x3 and X1^3 in W2 do not
        assert_eq!(bad.unwrap_err(), SymmetryError::NotASymmetry { poly: 2 });
    }

    #[test]
    fn determinants() {
        assert!(determinant_phase(&element_j(&lt())).is_zero());
        assert!(determinant_phase(&GroupElement::identity(6, 2)).is_zero());
        let g = GroupElement::new(
            vec![rat(1, 5), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(-1, 5)],
        );
        assert!(determinant_phase(&g).is_zero());
    }

    #[test]
    fn maximal_groups() {
        let q = quintic();
        let gmax = maximal_group(&q).unwrap();
        assert_eq!(gmax.order_mod_torus(), 625);
        let sl = sl_subgroup(&gmax, &q).unwrap();
        assert_eq!(sl.order_mod_torus(), 125);

        let m = lt();
        let gl = maximal_group(&m).unwrap();
        assert_eq!(gl.order_mod_torus(), 81);
        let sll = sl_subgroup(&gl, &m).unwrap();
        assert_eq!(sll.order_mod_torus(), 81);

        let c = conic();
        assert_eq!(maximal_group(&c).unwrap().order_mod_torus(), 2);
        let v = VarTable::with_default_p(vec!["x".into(), "y".into()], 1);
        let w = parse_polynomial("x^3 + y^3", &v.x_only()).unwrap();
        let cubic =
            ModelData::new("cubic", v, vec![1, 1], vec![w], None, GroupSelector::Max).unwrap();
        let gc = maximal_group(&cubic).unwrap();
        assert!(matches!(
            sl_subgroup(&gc, &cubic),
            Err(SymmetryError::NotCalabiYau)
        ));
    }

    #[test]
    fn trivial_sl() {
        let m = lt();
        let triv = j_group(&m).unwrap();
        assert_eq!(triv.order_mod_torus(), 1);
        assert_eq!(sl_subgroup(&triv, &m).unwrap().order_mod_torus(), 1);
    }

    #[test]
    fn relevant_counts() {
        let m = lt();
        let rel = relevant_elements(&j_group(&m).unwrap()).unwrap();
        assert_eq!(rel.len(), 3);
        assert!(rel[0].element.is_identity());
        let q = quintic();
        assert_eq!(relevant_elements(&j_group(&q).unwrap()).unwrap().len(), 5);
    }

    #[test]
    fn permutations_and_types() {
        let m = lt();
        let perms = PermutationGroup::of_model(&m);
        assert_eq!(perms.order(), 36);
        let g = extend_to_p(&ninths(&[3, 3, 3, 3, 0, 6]), &m).unwrap();
        assert_eq!(perms.orbit(&g).len(), 6);
        let h = extend_to_p(&ninths(&[2, 2, 5, 6, 3, 6]), &m).unwrap();
        assert_eq!(perms.orbit(&h).len(), 9);
        let id = GroupElement::identity(6, 2);
        assert_eq!(perms.orbit(&id), vec![id.clone()]);
        assert_eq!(perms.orbit_type(&id), id);
        assert_eq!(PermutationGroup::of_model(&quintic()).order(), 120);
    }

    #[test]
    fn labels() {
        let m = lt();
        let g = extend_to_p(&ninths(&[2, 2, 5, 6, 3, 6]), &m).unwrap();
        assert_eq!(g.label(), "(2,2,5,6,3,6;3,0)/9");
        assert_eq!(GroupElement::identity(2, 1).label(), "(0,0;0)");
    }
}
