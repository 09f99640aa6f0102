//! Explicit mirror maps: the Krawitz map for the quintic and the assignment
//! for the Libgober-Teitelbaum pair of cubics.
//!
//! Both maps send twisted-sector generators of one model to untwisted Jacobi
//! classes of the other. Bijectivity is checked by expressing every image in
//! the quotient basis of the target slice and computing an exact rank.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::arith::{rank, RatMatrix, Rational, SparseEchelon};
use crate::chiral::{ChiralError, SectorSlice};
use crate::polycore::{parse_compact_monomial, Monomial, VarTable};
use crate::statespace::{Generator, SectorKind, StateLabel, StateSpace};
use crate::symmetry::GroupElement;
use crate::tables::{numerators_over, table4, FixtureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MirrorError {
    #[error("wrong model: {0}")]
    WrongModel(String),
    #[error("rule not applicable to {0}")]
    RuleNotApplicable(String),
    #[error("images are linearly dependent: {dependent:?}")]
    NotBijective { dependent: Vec<String> },
    #[error("{source_count} source generators for a target of dimension {target}")]
    DimensionMismatch { source_count: usize, target: usize },
    #[error(transparent)]
    Chiral(#[from] ChiralError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Rule,
    SpecialCase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorPair {
    pub source: StateLabel,
    pub target: StateLabel,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MirrorAssignment {
    pub pairs: Vec<MirrorPair>,
}

/// The generator `ω·m|id⟩` of the untwisted sector.
pub fn identity_label(m: Monomial) -> StateLabel {
    let (n, r) = (m.x.len(), m.p.len());
    StateLabel {
        element: GroupElement::identity(n, r),
        form: (0..n + r).collect(),
        generator: Generator::Jacobi {
            k: m.p_degree(),
            monomial: m,
        },
    }
}

/// `dt|γ⟩` on a sector fixing only the p-coordinates with phase zero.
fn dt_label(element: GroupElement) -> StateLabel {
    let n = element.n();
    let form = (0..element.r())
        .filter(|&i| element.phase(n + i).is_zero())
        .map(|i| n + i)
        .collect();
    StateLabel {
        element,
        form,
        generator: Generator::Projective { k: 0 },
    }
}

fn is_identity(l: &StateLabel) -> bool {
    l.element.is_identity()
}

impl MirrorAssignment {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks that the identity-sector targets form a basis of `slice`.
    ///
    /// Returns the rank, or `NotBijective` naming every source whose image
    /// lies in the span of the images before it.
    pub fn verify(&self, slice: &SectorSlice, vars: &VarTable) -> Result<usize, MirrorError> {
        let coords = self.target_coordinates(slice)?;
        let m = RatMatrix::from_rows(coords.clone(), slice.dimension).expect("coordinate rows");
        let rk = rank(&m);
        if rk < self.pairs.len() {
            let mut e = SparseEchelon::new();
            let mut dependent = Vec::new();
            for (pair, row) in self.pairs.iter().zip(coords) {
                if !e.insert(integer_row(&row)) {
                    dependent.push(pair.source.render(vars));
                }
            }
            return Err(MirrorError::NotBijective { dependent });
        }
        if rk != slice.dimension {
            return Err(MirrorError::DimensionMismatch {
                source_count: self.pairs.len(),
                target: slice.dimension,
            });
        }
        Ok(rk)
    }

    fn target_coordinates(&self, slice: &SectorSlice) -> Result<Vec<Vec<Rational>>, MirrorError> {
        self.pairs
            .iter()
            .map(|p| {
                let m = p.target.monomial().ok_or_else(|| {
                    MirrorError::RuleNotApplicable("target is not a Jacobi class".into())
                })?;
                Ok(slice.coordinates(m)?)
            })
            .collect()
    }

    /// `[{source: {gamma, generator}, target_monomial, provenance}]`.
    pub fn to_json(&self, source_vars: &VarTable, target_vars: &VarTable) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .pairs
            .iter()
            .map(|p| {
                let target = match p.target.monomial() {
                    Some(m) if is_identity(&p.target) => m.display(target_vars).to_string(),
                    _ => p.target.render(target_vars),
                };
                json!({
                    "source": {
                        "gamma": p.source.element.phases().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                        "generator": p.source.generator_text(source_vars),
                    },
                    "target_monomial": target,
                    "provenance": p.provenance,
                })
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn to_text(&self, source_vars: &VarTable, target_vars: &VarTable) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            let target = match p.target.monomial() {
                Some(m) if is_identity(&p.target) => format!("{}|id>", m.display(target_vars)),
                _ => p.target.render(target_vars),
            };
            let tag = match p.provenance {
                Provenance::Rule => "",
                Provenance::SpecialCase => "  (special)",
            };
            out.push_str(&format!(
                "{} -> {}{}\n",
                p.source.render(source_vars),
                target,
                tag
            ));
        }
        out
    }
}

fn integer_row(row: &[Rational]) -> Vec<(usize, BigInt)> {
    let den = row.iter().fold(BigInt::one(), |a, q| a.lcm(q.denom()));
    row.iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(i, q)| (i, q.numer() * (&den / q.denom())))
        .collect()
}

// ---------------------------------------------------------------------------
// Libgober-Teitelbaum

fn check_lt_shape(vars: &VarTable) -> Result<(), MirrorError> {
    if vars.n() == 6 && vars.r() == 2 {
        Ok(())
    } else {
        Err(MirrorError::WrongModel(format!(
            "expected 6 x-coordinates and 2 polynomials, got {} and {}",
            vars.n(),
            vars.r()
        )))
    }
}

fn ninths(g: &GroupElement) -> Result<Vec<i64>, MirrorError> {
    numerators_over(g, 9)
        .ok_or_else(|| MirrorError::RuleNotApplicable(format!("{g} is not in ninths")))
}

/// The floor/min assignment on an element `(b1,b2,b3,c1,c2,c3;a1,a2)/9`,
/// with no check on the result:
/// `p1^{min⌊b/3⌋} p2^{min⌊c/3⌋} Π x_i^{⌊b_i/3⌋-min} X_i^{⌊c_i/3⌋-min}`.
pub fn lt_formula(nums: &[i64]) -> Monomial {
    let block = |v: &[i64]| -> (u32, Vec<u32>) {
        let f: Vec<u32> = v.iter().map(|b| (b.div_euclid(3)) as u32).collect();
        let lo = *f.iter().min().unwrap_or(&0);
        (lo, f.iter().map(|e| e - lo).collect())
    };
    let (pb, xb) = block(&nums[0..3]);
    let (pc, xc) = block(&nums[3..6]);
    let mut x = xb;
    x.extend(xc);
    Monomial { x, p: vec![pb, pc] }
}

/// The general rule, for `dt|γ⟩` with `r_γ - n_γ = 1`. The image must be an
/// identity-sector class of bidegree (2,1): p-degree 1, x-degree 3.
pub fn lt_rule(label: &StateLabel) -> Result<StateLabel, MirrorError> {
    let g = &label.element;
    check_lt_shape(&VarTable::with_default_p(vec![String::new(); g.n()], g.r()))?;
    let fixed_x = (0..g.n()).filter(|&j| g.phase(j).is_zero()).count();
    let fixed_p = (0..g.r()).filter(|&i| g.phase(g.n() + i).is_zero()).count();
    if label.generator != (Generator::Projective { k: 0 }) || fixed_p != fixed_x + 1 {
        return Err(MirrorError::RuleNotApplicable(g.label()));
    }
    let m = lt_formula(&ninths(g)?);
    if m.p_degree() != 1 || m.x.iter().sum::<u32>() != 3 {
        return Err(MirrorError::RuleNotApplicable(format!(
            "{} gives a class outside (2,1)",
            g.label()
        )));
    }
    Ok(identity_label(m))
}

/// The assignments made case by case: the two 2-dimensional Jacobi sectors
/// and the three sectors with `r_γ = 2`, `n_γ = 0`.
pub fn lt_special(label: &StateLabel) -> Result<StateLabel, MirrorError> {
    let g = &label.element;
    check_lt_shape(&VarTable::with_default_p(vec![String::new(); g.n()], g.r()))?;
    let nums = ninths(g)?;
    let mono = |x: [u32; 6], p: [u32; 2]| {
        identity_label(Monomial {
            x: x.to_vec(),
            p: p.to_vec(),
        })
    };
    let cube_at = |m: &Monomial, range: std::ops::Range<usize>| -> Option<usize> {
        let hit: Vec<usize> = (0..6).filter(|&j| m.x[j] != 0).collect();
        match hit.as_slice() {
            [j] if range.contains(j) && m.x[*j] == 3 && m.p_degree() == 0 => Some(*j),
            _ => None,
        }
    };
    let n = |v: [i64; 6]| -> Vec<i64> { v.iter().copied().chain([0, 0]).collect() };
    let out = match &label.generator {
        Generator::Jacobi { monomial, .. } if nums == n([0, 0, 0, 3, 3, 3]) => {
            cube_at(monomial, 0..3).map(|j| {
                let mut x = [0; 6];
                x[j] = 3;
                mono(x, [0, 1])
            })
        }
        Generator::Jacobi { monomial, .. } if nums == n([3, 3, 3, 0, 0, 0]) => {
            cube_at(monomial, 3..6).map(|j| {
                let mut x = [0; 6];
                x[j] = 3;
                mono(x, [1, 0])
            })
        }
        Generator::Projective { k: 0 } if nums == n([6, 6, 6, 3, 3, 3]) => {
            Some(mono([1, 1, 1, 0, 0, 0], [1, 0]))
        }
        Generator::Projective { k: 0 } if nums == n([3, 3, 3, 6, 6, 6]) => {
            Some(mono([0, 0, 0, 1, 1, 1], [0, 1]))
        }
        // the most symmetric element; the image is the class of p1*x1^3
        Generator::Projective { k: 1 } if nums == n([3, 3, 3, 3, 3, 3]) => {
            Some(mono([0, 0, 0, 1, 1, 1], [1, 0]))
        }
        _ => None,
    };
    out.ok_or_else(|| MirrorError::RuleNotApplicable(g.label()))
}

/// Special cases first, then the general rule.
pub fn lt_assign(label: &StateLabel) -> Result<(StateLabel, Provenance), MirrorError> {
    match lt_special(label) {
        Ok(t) => Ok((t, Provenance::SpecialCase)),
        Err(MirrorError::RuleNotApplicable(_)) => lt_rule(label).map(|t| (t, Provenance::Rule)),
        Err(e) => Err(e),
    }
}

/// The map from the (1,1) generators of `source` to the (2,1) piece of the
/// untwisted sector of `target`, with its bijectivity verified.
pub fn build_mirror_map(
    source: &StateSpace,
    target: &StateSpace,
) -> Result<MirrorAssignment, MirrorError> {
    check_lt_shape(&source.vars)?;
    check_lt_shape(&target.vars)?;
    let labels = source.labels_at(1, 1);
    if labels.is_empty() {
        return Ok(MirrorAssignment::default());
    }
    let slice = target_slice(target)?;
    let mut pairs = Vec::with_capacity(labels.len());
    for l in labels {
        let (t, provenance) = lt_assign(l)?;
        let m = t.monomial().expect("identity-sector image");
        if !slice.contains(m) {
            return Err(MirrorError::RuleNotApplicable(format!(
                "{} maps outside the invariant (2,1) slice",
                l.render(&source.vars)
            )));
        }
        pairs.push(MirrorPair {
            source: l.clone(),
            target: t,
            provenance,
        });
    }
    let a = MirrorAssignment { pairs };
    a.verify(slice, &source.vars)?;
    Ok(a)
}

/// The p-degree 1 slice of the untwisted sector, which sits at (2,1).
pub fn target_slice(target: &StateSpace) -> Result<&SectorSlice, MirrorError> {
    let id = GroupElement::identity(target.vars.n(), target.vars.r());
    target
        .slice_for(&id, 1)
        .ok_or(MirrorError::DimensionMismatch {
            source_count: 0,
            target: 0,
        })
}

// ---------------------------------------------------------------------------
// Table 4 comparison

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "note")]
pub enum RowStatus {
    Match,
    /// The printed monomial differs but has the same class.
    MatchByClass,
    DocumentedTypo(String),
    Unexpected,
    /// No pair in the assignment has this source.
    Missing,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowDiff {
    pub source: String,
    pub printed: String,
    pub derived: Option<String>,
    #[serde(flatten)]
    pub status: RowStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table4Report {
    pub rows: Vec<RowDiff>,
    /// Pairs with no row in the table.
    pub unlisted: Vec<String>,
    /// Disagreements between the table and the text around it.
    pub notes: Vec<String>,
}

impl Table4Report {
    pub fn count(&self, pred: impl Fn(&RowStatus) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.status)).count()
    }

    /// Rows agreeing with the derived map, as monomials or as classes.
    pub fn matches(&self) -> usize {
        self.count(|s| matches!(s, RowStatus::Match | RowStatus::MatchByClass))
    }

    pub fn documented_typos(&self) -> usize {
        self.count(|s| matches!(s, RowStatus::DocumentedTypo(_)))
    }

    pub fn unexpected(&self) -> usize {
        self.count(|s| matches!(s, RowStatus::Unexpected | RowStatus::Missing))
            + self.unlisted.len()
    }
}

/// `dt`, `tdt`, or the compact monomial of a Jacobi generator.
fn descriptor(l: &StateLabel, vars: &VarTable) -> String {
    match &l.generator {
        Generator::Projective { k: 0 } => "dt".into(),
        Generator::Projective { k: 1 } => "tdt".into(),
        Generator::Projective { k } => format!("t^{k}dt"),
        Generator::Jacobi { monomial, .. } => monomial.compact(vars).to_string(),
    }
}

const TEXT_VS_TABLE: &str = "the text assigns X_i^3|(0,0,0,3,3,3;0,0)/9> to p2X_i^3, \
    repeating the element of the x_i^3 case; the table's (3,3,3,0,0,0;0,0)/9 and p1X_i^3 are used";

/// Row-by-row comparison of an assignment with the printed table.
pub fn diff_against_table4(
    a: &MirrorAssignment,
    slice: &SectorSlice,
    source_vars: &VarTable,
    target_vars: &VarTable,
) -> Result<Table4Report, MirrorError> {
    let rows = table4()?;
    let mut index: BTreeMap<(Vec<i64>, String), &MirrorPair> = BTreeMap::new();
    for p in &a.pairs {
        if let Some(nums) = numerators_over(&p.source.element, 9) {
            index.insert((nums, descriptor(&p.source, source_vars)), p);
        }
    }
    let mut used = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for row in &rows {
        let key = (
            numerators_over(&row.element, 9).expect("fixture in ninths"),
            row.generator.clone(),
        );
        let source = format!(
            "{}|{}>",
            row.generator,
            row.element.label_over(&BigInt::from(9))
        );
        let Some(pair) = index.get(&key) else {
            out.push(RowDiff {
                source,
                printed: row.printed.clone(),
                derived: None,
                status: RowStatus::Missing,
            });
            continue;
        };
        used.insert(key);
        let derived = pair.target.monomial().expect("identity-sector image");
        let printed = parse_compact_monomial(&row.printed, target_vars).map_err(|e| {
            MirrorError::Fixture(FixtureError::Syntax {
                line: 0,
                message: e.to_string(),
            })
        })?;
        let status = if &printed == derived {
            RowStatus::Match
        } else if same_class(&printed, derived, slice)? {
            RowStatus::MatchByClass
        } else if let Some(note) = &row.note {
            RowStatus::DocumentedTypo(note.clone())
        } else {
            RowStatus::Unexpected
        };
        out.push(RowDiff {
            source,
            printed: row.printed.clone(),
            derived: Some(derived.compact(target_vars).to_string()),
            status,
        });
    }
    let unlisted = index
        .iter()
        .filter(|(k, _)| !used.contains(*k))
        .map(|(_, p)| p.source.render(source_vars))
        .collect();
    Ok(Table4Report {
        rows: out,
        unlisted,
        notes: vec![TEXT_VS_TABLE.to_string()],
    })
}

fn same_class(a: &Monomial, b: &Monomial, slice: &SectorSlice) -> Result<bool, MirrorError> {
    if !slice.contains(a) || !slice.contains(b) {
        return Ok(false);
    }
    let (u, v) = (slice.coordinates(a)?, slice.coordinates(b)?);
    Ok(u == v && u.iter().any(|q| !q.is_zero()))
}

// ---------------------------------------------------------------------------
// Quintic

fn check_quintic_shape(vars: &VarTable) -> Result<(), MirrorError> {
    if vars.n() == 5 && vars.r() == 1 {
        Ok(())
    } else {
        Err(MirrorError::WrongModel(format!(
            "expected 5 x-coordinates and 1 polynomial, got {} and {}",
            vars.n(),
            vars.r()
        )))
    }
}

/// `p^{(a+b+c+d+e)/5 - 1} Π x_i^{a_i - 1}` for numerators in 1..=5.
pub fn krawitz_exponents(a: &[u32]) -> Result<Monomial, MirrorError> {
    let s: u32 = a.iter().sum();
    if a.len() != 5 || a.contains(&0) || !s.is_multiple_of(5) {
        return Err(MirrorError::RuleNotApplicable(format!("{a:?}")));
    }
    Ok(Monomial {
        x: a.iter().map(|v| v - 1).collect(),
        p: vec![s / 5 - 1],
    })
}

/// Both directions of the quintic map. A twisted `1|(a,b,c,d,e;0)/5⟩` goes
/// to an untwisted monomial; an untwisted `(p x1..x5)^{a-1}` goes to
/// `1|(a,a,a,a,a;0)/5⟩`.
pub fn krawitz_quintic(label: &StateLabel) -> Result<StateLabel, MirrorError> {
    let g = &label.element;
    check_quintic_shape(&VarTable::with_default_p(vec![String::new(); g.n()], g.r()))?;
    if g.is_identity() {
        let m = label.monomial().ok_or_else(|| {
            MirrorError::RuleNotApplicable("untwisted label without a monomial".into())
        })?;
        let e = m.p[0];
        if e > 3 || m.x.iter().any(|&v| v != e) {
            return Err(MirrorError::RuleNotApplicable(format!(
                "{m:?} is not a power of p*x1*..*x5"
            )));
        }
        let a = Rational::new(BigInt::from(e + 1), BigInt::from(5));
        return Ok(dt_label(GroupElement::new(
            vec![a; 5],
            vec![Rational::zero()],
        )));
    }
    let nums = numerators_over(g, 5).ok_or_else(|| MirrorError::RuleNotApplicable(g.label()))?;
    if label.generator != (Generator::Projective { k: 0 }) || nums[5] != 0 || nums[..5].contains(&0)
    {
        return Err(MirrorError::RuleNotApplicable(g.label()));
    }
    let a: Vec<u32> = nums[..5].iter().map(|&v| v as u32).collect();
    Ok(identity_label(krawitz_exponents(&a)?))
}

#[derive(Clone, Debug)]
pub struct QuinticMirror {
    /// Twisted sectors of the mirror side to untwisted classes.
    pub twisted: MirrorAssignment,
    /// Untwisted classes of the mirror side to twisted sectors.
    pub untwisted: MirrorAssignment,
}

/// The quintic map from `mirror` (the side with twisted sectors fixing only
/// p) to `fermat`, checked piece by piece in p-degree.
pub fn build_quintic_map(
    mirror: &StateSpace,
    fermat: &StateSpace,
) -> Result<QuinticMirror, MirrorError> {
    check_quintic_shape(&mirror.vars)?;
    check_quintic_shape(&fermat.vars)?;
    let mut twisted = MirrorAssignment::default();
    let mut untwisted = MirrorAssignment::default();
    for s in &mirror.sectors {
        for e in &s.entries {
            let l = &e.label;
            if s.kind == SectorKind::Projective && s.fd.n_gamma == 0 {
                twisted.pairs.push(MirrorPair {
                    source: l.clone(),
                    target: krawitz_quintic(l)?,
                    provenance: Provenance::Rule,
                });
            } else if is_identity(l) {
                // the class is represented by (p x1..x5)^k
                let Generator::Jacobi { k, .. } = l.generator else {
                    continue;
                };
                let m = Monomial {
                    x: vec![k; 5],
                    p: vec![k],
                };
                let slice = mirror.slice_for(&l.element, k).expect("identity slice");
                if slice.dimension != 1 || slice.coordinates(&m)?.iter().all(|q| q.is_zero()) {
                    return Err(MirrorError::RuleNotApplicable(format!(
                        "untwisted class in p-degree {k}"
                    )));
                }
                let source = StateLabel {
                    generator: Generator::Jacobi { k, monomial: m },
                    ..l.clone()
                };
                untwisted.pairs.push(MirrorPair {
                    target: krawitz_quintic(&source)?,
                    source,
                    provenance: Provenance::Rule,
                });
            }
        }
    }
    // twisted images, one p-degree at a time
    let id = GroupElement::identity(5, 1);
    let mut by_degree: BTreeMap<u32, MirrorAssignment> = BTreeMap::new();
    for p in &twisted.pairs {
        let k = p.target.monomial().map(|m| m.p_degree()).unwrap_or(0);
        by_degree.entry(k).or_default().pairs.push(p.clone());
    }
    for (k, part) in &by_degree {
        let slice = fermat
            .slice_for(&id, *k)
            .ok_or(MirrorError::DimensionMismatch {
                source_count: part.len(),
                target: 0,
            })?;
        for p in &part.pairs {
            if !slice.contains(p.target.monomial().expect("monomial image")) {
                return Err(MirrorError::RuleNotApplicable(
                    p.source.render(&mirror.vars),
                ));
            }
        }
        part.verify(slice, &mirror.vars)?;
    }
    // untwisted images must be distinct twisted generators of the Fermat side
    let fermat_dt: Vec<&StateLabel> = fermat
        .sectors
        .iter()
        .filter(|s| s.kind == SectorKind::Projective)
        .flat_map(|s| s.entries.iter().map(|e| &e.label))
        .collect();
    for (i, p) in untwisted.pairs.iter().enumerate() {
        let hits = untwisted.pairs[..i].iter().any(|q| q.target == p.target);
        if hits || !fermat_dt.contains(&&p.target) {
            return Err(MirrorError::NotBijective {
                dependent: vec![p.source.render(&mirror.vars)],
            });
        }
    }
    if untwisted.len() != fermat_dt.len() {
        return Err(MirrorError::DimensionMismatch {
            source_count: untwisted.len(),
            target: fermat_dt.len(),
        });
    }
    Ok(QuinticMirror { twisted, untwisted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::parse_element;

    fn dt(text: &str) -> StateLabel {
        dt_label(parse_element(text, 9).unwrap())
    }

    fn lt_vars() -> VarTable {
        VarTable::with_default_p(
            ["x1", "x2", "x3", "X1", "X2", "X3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            2,
        )
    }

    fn image(l: &StateLabel) -> String {
        l.monomial().unwrap().compact(&lt_vars()).to_string()
    }

    #[test]
    fn rule_examples() {
        assert_eq!(image(&lt_rule(&dt("3,3,3,3,0,6;0,0")).unwrap()), "p1X1X3^2");
        assert_eq!(image(&lt_rule(&dt("2,2,5,6,3,6;3,0")).unwrap()), "p2x3X1X3");
        assert_eq!(image(&lt_rule(&dt("3,6,3,1,7,1;0,6")).unwrap()), "p1x2X2^2");
    }

    #[test]
    fn rule_refuses_other_sectors() {
        // r - n = 2 here
        assert!(matches!(
            lt_rule(&dt("6,6,6,3,3,3;0,0")),
            Err(MirrorError::RuleNotApplicable(_))
        ));
        // the literal formula has the wrong bidegree on this element
        let raw = lt_formula(&[6, 6, 6, 3, 3, 3, 0, 0]);
        assert_eq!(raw.compact(&lt_vars()).to_string(), "p1^2p2");
    }

    #[test]
    fn special_cases() {
        assert_eq!(
            image(&lt_special(&dt("6,6,6,3,3,3;0,0")).unwrap()),
            "p1x1x2x3"
        );
        assert_eq!(
            image(&lt_special(&dt("3,3,3,6,6,6;0,0")).unwrap()),
            "p2X1X2X3"
        );
        let mut tdt = dt("3,3,3,3,3,3;0,0");
        tdt.generator = Generator::Projective { k: 1 };
        assert_eq!(image(&lt_special(&tdt).unwrap()), "p1X1X2X3");
        let jac = StateLabel {
            element: parse_element("0,0,0,3,3,3;0,0", 9).unwrap(),
            form: vec![0, 1, 2, 6, 7],
            generator: Generator::Jacobi {
                k: 0,
                monomial: parse_compact_monomial("x1^3", &lt_vars()).unwrap(),
            },
        };
        assert_eq!(image(&lt_special(&jac).unwrap()), "p2x1^3");
        assert!(lt_special(&dt("3,3,3,3,0,6;0,0")).is_err());
    }

    #[test]
    fn krawitz_examples() {
        let v = VarTable::with_default_p((1..=5).map(|i| format!("x{i}")).collect(), 1);
        assert_eq!(
            krawitz_exponents(&[1, 1, 1, 1, 1]).unwrap(),
            Monomial::one(5, 1)
        );
        assert_eq!(
            krawitz_exponents(&[1, 2, 3, 4, 5])
                .unwrap()
                .compact(&v)
                .to_string(),
            "p^2x2x3^2x4^3x5^4"
        );
        assert!(krawitz_exponents(&[1, 1, 1, 1, 2]).is_err());
        let src = identity_label(Monomial {
            x: vec![3; 5],
            p: vec![3],
        });
        let t = krawitz_quintic(&src).unwrap();
        assert_eq!(t.element.label(), "(4,4,4,4,4;0)/5");
        assert_eq!(t.generator, Generator::Projective { k: 0 });
    }

    #[test]
    fn wrong_model() {
        let g = GroupElement::identity(3, 1);
        let l = identity_label(Monomial::one(3, 1));
        assert!(matches!(
            krawitz_quintic(&l),
            Err(MirrorError::WrongModel(_))
        ));
        assert!(matches!(
            lt_rule(&dt_label(g)),
            Err(MirrorError::WrongModel(_))
        ));
    }
}
