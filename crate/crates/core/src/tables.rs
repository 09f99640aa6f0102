//! The appendix tables as fixture data, and checks of computed results
//! against them.
//!
//! Fixtures are parsed on demand and never modified; comparisons only
//! report.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{rank, RatMatrix, Rational};
use crate::chiral::{ChiralError, SectorSlice};
use crate::polycore::{Monomial, VarTable};
use crate::statespace::{SectorKind, StateSpace};
use crate::symmetry::{GroupElement, PermutationGroup};

pub const TABLE1: &str = include_str!("fixtures/table1.txt");
pub const TABLE2: &str = include_str!("fixtures/table2.txt");
pub const TABLE3: &str = include_str!("fixtures/table3.txt");
pub const TABLE4: &str = include_str!("fixtures/table4.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixtureError {
    #[error("fixture line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("template names unknown variable '{0}'")]
    UnknownVariable(String),
    #[error(transparent)]
    Chiral(#[from] ChiralError),
}

fn bad(line: usize, message: impl Into<String>) -> FixtureError {
    FixtureError::Syntax {
        line,
        message: message.into(),
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Parses `b1,..,bn;a1,..,ar` numerators over `den`.
pub fn parse_element(text: &str, den: i64) -> Option<GroupElement> {
    let (xs, ps) = text.trim().split_once(';')?;
    let nums = |s: &str| -> Option<Vec<Rational>> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .ok()
                    .map(|v| Rational::new(v.into(), den.into()))
            })
            .collect()
    };
    Some(GroupElement::new(nums(xs)?, nums(ps)?))
}

// ---------------------------------------------------------------------------
// Table 1: templates

#[derive(Clone, Debug, PartialEq, Eq)]
enum Index {
    Fixed(u32),
    Letter(char),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Factor {
    family: String,
    index: Index,
    exp: u32,
}

/// One form on a Table 1 row: a monomial template, or a sum of a template
/// over its letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    factors: Vec<Factor>,
    sum_over: Option<char>,
}

#[derive(Clone, Debug)]
pub struct Table1Row {
    pub text: String,
    pub forms: Vec<Form>,
    pub count: usize,
}

fn parse_factor(tok: &str, line: usize) -> Result<Factor, FixtureError> {
    let family: String = tok
        .chars()
        .take_while(|c| c.is_ascii_alphabetic())
        .collect();
    if family.is_empty() {
        return Err(bad(line, format!("bad factor '{tok}'")));
    }
    let rest = &tok[family.len()..];
    let (index, rest) = if let Some(r) = rest.strip_prefix('{') {
        let c = r.chars().next().ok_or_else(|| bad(line, "empty index"))?;
        let r = r[c.len_utf8()..]
            .strip_prefix('}')
            .ok_or_else(|| bad(line, "unclosed index"))?;
        (Index::Letter(c), r)
    } else {
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let v = digits
            .parse()
            .map_err(|_| bad(line, format!("missing index in '{tok}'")))?;
        (Index::Fixed(v), &rest[digits.len()..])
    };
    let exp = match rest.strip_prefix('^') {
        Some(e) => e
            .parse()
            .map_err(|_| bad(line, format!("bad exponent in '{tok}'")))?,
        None if rest.is_empty() => 1,
        None => return Err(bad(line, format!("trailing '{rest}' in '{tok}'"))),
    };
    Ok(Factor { family, index, exp })
}

fn parse_form(text: &str, line: usize) -> Result<Form, FixtureError> {
    let mut factors = Vec::new();
    let mut sum_over = None;
    for tok in text.split('*').map(str::trim) {
        if let Some(inner) = tok.strip_prefix("sum(").and_then(|t| t.strip_suffix(')')) {
            let f = parse_factor(inner, line)?;
            match f.index {
                Index::Letter(c) => sum_over = Some(c),
                Index::Fixed(_) => return Err(bad(line, "sum needs a letter index")),
            }
            factors.push(f);
        } else {
            factors.push(parse_factor(tok, line)?);
        }
    }
    Ok(Form { factors, sum_over })
}

pub fn table1() -> Result<Vec<Table1Row>, FixtureError> {
    data_lines(TABLE1)
        .map(|(line, l)| {
            let (forms, count) = l
                .rsplit_once('|')
                .ok_or_else(|| bad(line, "missing count"))?;
            let count = count.trim().parse().map_err(|_| bad(line, "bad count"))?;
            let forms = forms
                .split('=')
                .map(|f| parse_form(f.trim(), line))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Table1Row {
                text: forms_text(l),
                forms,
                count,
            })
        })
        .collect()
}

fn forms_text(l: &str) -> String {
    l.rsplit_once('|')
        .map(|(f, _)| f.trim().to_string())
        .unwrap_or_default()
}

impl Form {
    /// Letters that are free in this form (a summed letter is bound).
    fn letters(&self) -> Vec<char> {
        let mut v: Vec<char> = Vec::new();
        for f in &self.factors {
            if let Index::Letter(c) = f.index {
                if Some(c) != self.sum_over && !v.contains(&c) {
                    v.push(c);
                }
            }
        }
        v
    }

    /// Polynomial terms for an assignment of the free letters.
    fn expand(
        &self,
        values: &HashMap<char, u32>,
        vars: &VarTable,
        range: u32,
    ) -> Result<Vec<Monomial>, FixtureError> {
        let one = |vals: &HashMap<char, u32>| -> Result<Monomial, FixtureError> {
            let mut m = Monomial::one(vars.n(), vars.r());
            for f in &self.factors {
                let i = match f.index {
                    Index::Fixed(i) => i,
                    Index::Letter(c) => vals[&c],
                };
                let name = format!("{}{}", f.family, i);
                let j = vars
                    .lookup(&name)
                    .ok_or(FixtureError::UnknownVariable(name))?;
                *m.exp_mut(j) += f.exp;
            }
            Ok(m)
        };
        match self.sum_over {
            None => Ok(vec![one(values)?]),
            Some(c) => (1..=range)
                .map(|v| {
                    let mut vals = values.clone();
                    vals.insert(c, v);
                    one(&vals)
                })
                .collect(),
        }
    }
}

/// For each letter, the variable families it indexes anywhere on the row.
fn letter_families(forms: &[Form]) -> HashMap<char, BTreeSet<String>> {
    let mut out: HashMap<char, BTreeSet<String>> = HashMap::new();
    for form in forms {
        for f in &form.factors {
            if let Index::Letter(c) = f.index {
                if Some(c) != form.sum_over {
                    out.entry(c).or_default().insert(f.family.clone());
                }
            }
        }
    }
    out
}

/// All extensions of `fixed` to `letters` in 1..=range such that two
/// different letters sharing a family differ.
fn assignments(
    letters: &[char],
    fixed: &HashMap<char, u32>,
    fam: &HashMap<char, BTreeSet<String>>,
    range: u32,
) -> Vec<HashMap<char, u32>> {
    let clash = |a: &HashMap<char, u32>| {
        a.iter().any(|(c, v)| {
            a.iter()
                .any(|(d, w)| c < d && v == w && !fam[c].is_disjoint(&fam[d]))
        })
    };
    let mut out = Vec::new();
    let mut stack = vec![fixed.clone()];
    while let Some(a) = stack.pop() {
        if clash(&a) {
            continue;
        }
        match letters.iter().find(|c| !a.contains_key(c)) {
            None => out.push(a),
            Some(&c) => {
                for v in (1..=range).rev() {
                    let mut b = a.clone();
                    b.insert(c, v);
                    stack.push(b);
                }
            }
        }
    }
    out
}

fn normalized(v: Vec<Rational>) -> Vec<Rational> {
    match v.iter().position(|q| !q.is_zero()) {
        None => v,
        Some(i) => {
            let f = v[i].clone();
            v.into_iter().map(|q| q / &f).collect()
        }
    }
}

fn class_of(terms: &[Monomial], slice: &SectorSlice) -> Result<Vec<Rational>, FixtureError> {
    let t: Vec<(Monomial, Rational)> = terms.iter().map(|m| (m.clone(), Rational::one())).collect();
    let nf = slice.normal_form(&t)?;
    let mut out = vec![Rational::zero(); slice.dimension];
    for (m, q) in nf {
        let i = slice
            .quotient_basis
            .binary_search(&m)
            .expect("normal form in basis");
        out[i] = q;
    }
    Ok(normalized(out))
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1RowCheck {
    pub text: String,
    pub printed_count: usize,
    pub forms: usize,
    /// Distinct monomials produced by the first form.
    pub generated: usize,
    /// Alternative forms checked for equality with the first form.
    pub synonym_checks: usize,
    /// Alternative expansions whose class differs from the first form's.
    pub synonym_failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Report {
    pub rows: Vec<Table1RowCheck>,
    /// Rank of the classes of all first-form monomials.
    pub rank: usize,
    pub slice_dimension: usize,
    /// Row-size profile: count -> number of rows.
    pub profile: BTreeMap<usize, usize>,
}

impl Table1Report {
    pub fn passed(&self) -> bool {
        let total: usize = self.rows.iter().map(|r| r.generated).sum();
        self.rows.iter().all(|r| {
            r.generated == r.printed_count
                && r.synonym_failures.is_empty()
                && (r.forms == 1 || r.synonym_checks > 0)
        }) && total == self.slice_dimension
            && self.rank == self.slice_dimension
    }
}

/// First-form monomials of every row, in row order.
pub fn table1_generators(
    rows: &[Table1Row],
    vars: &VarTable,
    range: u32,
) -> Result<Vec<Vec<Monomial>>, FixtureError> {
    rows.iter()
        .map(|row| {
            let first = &row.forms[0];
            let fam = letter_families(std::slice::from_ref(first));
            let mut seen = BTreeSet::new();
            for a in assignments(&first.letters(), &HashMap::new(), &fam, range) {
                seen.extend(first.expand(&a, vars, range)?);
            }
            Ok(seen.into_iter().collect())
        })
        .collect()
}

/// Checks the Table 1 rows against the (2,1) slice of the untwisted
/// sector: row sizes, independence, and the stated equalities.
pub fn check_table1(
    slice: &SectorSlice,
    vars: &VarTable,
    range: u32,
) -> Result<Table1Report, FixtureError> {
    let rows = table1()?;
    let gens = table1_generators(&rows, vars, range)?;
    let mut checks = Vec::new();
    let mut all_classes = Vec::new();
    for (row, g) in rows.iter().zip(&gens) {
        for m in g {
            all_classes.push(class_of(std::slice::from_ref(m), slice)?);
        }
        let first = &row.forms[0];
        let fam = letter_families(&row.forms);
        let local = letter_families(std::slice::from_ref(first));
        let mut n_checks = 0;
        let mut failures = Vec::new();
        for a in assignments(&first.letters(), &HashMap::new(), &local, range) {
            // the alternatives are only asserted when the first form's
            // letters also respect the row-wide constraints
            if !assignments(&first.letters(), &a, &fam, range)
                .iter()
                .any(|b| b == &a)
            {
                continue;
            }
            let base_terms = first.expand(&a, vars, range)?;
            let base = class_of(&base_terms, slice)?;
            for alt in &row.forms[1..] {
                let mut letters = first.letters();
                for c in alt.letters() {
                    if !letters.contains(&c) {
                        letters.push(c);
                    }
                }
                for b in assignments(&letters, &a, &fam, range) {
                    let terms = alt.expand(&b, vars, range)?;
                    n_checks += 1;
                    if class_of(&terms, slice)? != base {
                        let shown: Vec<String> =
                            terms.iter().map(|m| m.compact(vars).to_string()).collect();
                        failures.push(format!(
                            "{} vs {}",
                            base_terms[0].compact(vars),
                            shown.join("+")
                        ));
                    }
                }
            }
        }
        checks.push(Table1RowCheck {
            text: row.text.clone(),
            printed_count: row.count,
            forms: row.forms.len(),
            generated: g.len(),
            synonym_checks: n_checks,
            synonym_failures: failures,
        });
    }
    let cols = slice.dimension;
    let m = RatMatrix::from_rows(all_classes, cols).expect("rows have slice dimension");
    let mut profile = BTreeMap::new();
    for r in &rows {
        *profile.entry(r.count).or_insert(0) += 1;
    }
    Ok(Table1Report {
        rows: checks,
        rank: rank(&m),
        slice_dimension: cols,
        profile,
    })
}

/// Index of the Table 1 row whose forms include a monomial in the class of
/// `m`, if any.
pub fn table1_row_of(
    m: &Monomial,
    slice: &SectorSlice,
    vars: &VarTable,
    range: u32,
) -> Result<Option<usize>, FixtureError> {
    let target = class_of(std::slice::from_ref(m), slice)?;
    let rows = table1()?;
    for (i, row) in rows.iter().enumerate() {
        for form in &row.forms {
            let local = letter_families(std::slice::from_ref(form));
            for a in assignments(&form.letters(), &HashMap::new(), &local, range) {
                if class_of(&form.expand(&a, vars, range)?, slice)? == target {
                    return Ok(Some(i));
                }
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Tables 2 and 3: sector inventory

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InventoryRow {
    pub r_gamma: usize,
    pub n_gamma: usize,
    pub element: GroupElement,
    pub age: i64,
    pub count: usize,
}

fn parse_inventory(text: &str, with_count: bool) -> Result<Vec<InventoryRow>, FixtureError> {
    data_lines(text)
        .map(|(line, l)| {
            let f: Vec<&str> = l.split('|').map(str::trim).collect();
            if f.len() != if with_count { 4 } else { 3 } {
                return Err(bad(line, "wrong number of fields"));
            }
            let rn: Vec<usize> = f[0]
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad(line, "bad r n")))
                .collect::<Result<_, _>>()?;
            if rn.len() != 2 {
                return Err(bad(line, "expected 'r n'"));
            }
            let element = parse_element(f[1], 9).ok_or_else(|| bad(line, "bad element"))?;
            let age = f[2].parse().map_err(|_| bad(line, "bad age"))?;
            let count = if with_count {
                f[3].parse().map_err(|_| bad(line, "bad count"))?
            } else {
                1
            };
            Ok(InventoryRow {
                r_gamma: rn[0],
                n_gamma: rn[1],
                element,
                age,
                count,
            })
        })
        .collect()
}

pub fn table2() -> Result<Vec<InventoryRow>, FixtureError> {
    parse_inventory(TABLE2, false)
}

pub fn table3() -> Result<Vec<InventoryRow>, FixtureError> {
    parse_inventory(TABLE3, true)
}

#[derive(Clone, Debug)]
pub struct InventoryReport {
    /// Jacobi-type sectors computed, as rows.
    pub jacobi: Vec<InventoryRow>,
    /// Projective sectors grouped by orbit type.
    pub projective: Vec<InventoryRow>,
    /// Printed Table 2 rows with no computed counterpart.
    pub table2_unmatched: Vec<InventoryRow>,
    /// Computed Jacobi rows with no printed counterpart.
    pub jacobi_unmatched: Vec<InventoryRow>,
    /// Printed Table 2 rows repeating an earlier printed row.
    pub table2_duplicates: Vec<InventoryRow>,
    pub table3_unmatched: Vec<InventoryRow>,
    pub projective_unmatched: Vec<InventoryRow>,
}

impl InventoryReport {
    /// Exact agreement, allowing only printed Table 2 rows that duplicate
    /// another printed row and are replaced by a computed row with the same
    /// (r, n, age).
    pub fn passed(&self) -> bool {
        let key = |r: &InventoryRow| (r.r_gamma, r.n_gamma, r.age);
        let mut a: Vec<_> = self.table2_unmatched.iter().map(key).collect();
        let mut b: Vec<_> = self.jacobi_unmatched.iter().map(key).collect();
        a.sort();
        b.sort();
        a == b
            && self
                .table2_unmatched
                .iter()
                .all(|r| self.table2_duplicates.contains(r))
            && self.table3_unmatched.is_empty()
            && self.projective_unmatched.is_empty()
    }
}

fn multiset_diff(a: &[InventoryRow], b: &[InventoryRow]) -> Vec<InventoryRow> {
    let mut rest: Vec<Option<&InventoryRow>> = b.iter().map(Some).collect();
    let mut out = Vec::new();
    for r in a {
        match rest.iter_mut().find(|x| x.is_some_and(|y| y == r)) {
            Some(slot) => *slot = None,
            None => out.push(r.clone()),
        }
    }
    out
}

/// Compares the contributing sectors of a state space with Tables 2 and 3.
pub fn check_inventory(
    space: &StateSpace,
    perms: &PermutationGroup,
) -> Result<InventoryReport, FixtureError> {
    let row =
        |s: &crate::statespace::SectorContribution, element: GroupElement, count| InventoryRow {
            r_gamma: s.fd.r_gamma,
            n_gamma: s.fd.n_gamma,
            element,
            age: s.fd.age_integer().unwrap_or(-1),
            count,
        };
    let jacobi: Vec<InventoryRow> = space
        .sectors
        .iter()
        .filter(|s| s.kind == SectorKind::Jacobi)
        .map(|s| row(s, s.fd.element.clone(), 1))
        .collect();
    let mut by_type: BTreeMap<GroupElement, InventoryRow> = BTreeMap::new();
    for s in space
        .sectors
        .iter()
        .filter(|s| s.kind == SectorKind::Projective)
    {
        let key = perms.orbit_type(&s.fd.element);
        by_type
            .entry(key.clone())
            .or_insert_with(|| row(s, key, 0))
            .count += 1;
    }
    let projective: Vec<InventoryRow> = by_type.into_values().collect();

    let t2 = table2()?;
    let mut duplicates = Vec::new();
    for (i, r) in t2.iter().enumerate() {
        if t2[..i].contains(r) {
            duplicates.push(r.clone());
        }
    }
    let t3: Vec<InventoryRow> = table3()?
        .into_iter()
        .map(|r| InventoryRow {
            element: perms.orbit_type(&r.element),
            ..r
        })
        .collect();
    Ok(InventoryReport {
        table2_unmatched: multiset_diff(&t2, &jacobi),
        jacobi_unmatched: multiset_diff(&jacobi, &t2),
        table2_duplicates: duplicates,
        table3_unmatched: multiset_diff(&t3, &projective),
        projective_unmatched: multiset_diff(&projective, &t3),
        jacobi,
        projective,
    })
}

// ---------------------------------------------------------------------------
// Table 4

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table4Row {
    /// `dt`, `tdt`, or the monomial of a Jacobi generator.
    pub generator: String,
    pub element: GroupElement,
    pub printed: String,
    pub note: Option<String>,
}

pub fn table4() -> Result<Vec<Table4Row>, FixtureError> {
    data_lines(TABLE4)
        .map(|(line, l)| {
            let f: Vec<&str> = l.split('|').map(str::trim).collect();
            if f.len() < 2 || f.len() > 3 {
                return Err(bad(line, "wrong number of fields"));
            }
            let (generator, element) = f[0]
                .split_once(' ')
                .ok_or_else(|| bad(line, "expected generator and element"))?;
            Ok(Table4Row {
                generator: generator.to_string(),
                element: parse_element(element, 9).ok_or_else(|| bad(line, "bad element"))?,
                printed: f[1].to_string(),
                note: f.get(2).map(|s| s.to_string()),
            })
        })
        .collect()
}

/// Numerators of `g` over `den`, if `den` is a multiple of its order.
pub fn numerators_over(g: &GroupElement, den: i64) -> Option<Vec<i64>> {
    let d = BigInt::from(den);
    g.phases()
        .iter()
        .map(|q| {
            let v = q * Rational::from_integer(d.clone());
            if v.is_integer() {
                num_traits::ToPrimitive::to_i64(&v.to_integer())
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        let t1 = table1().unwrap();
        assert_eq!(t1.len(), 15);
        assert_eq!(t1.iter().map(|r| r.count).sum::<usize>(), 73);
        assert_eq!(table2().unwrap().len(), 5);
        let t3 = table3().unwrap();
        assert_eq!(t3.iter().map(|r| r.count).sum::<usize>(), 4 + 24 + 108);
        let t4 = table4().unwrap();
        assert_eq!(t4.len(), 73);
        assert_eq!(t4.iter().filter(|r| r.note.is_some()).count(), 8);
    }

    #[test]
    fn template_counts() {
        let vars = VarTable::with_default_p(
            ["x1", "x2", "x3", "X1", "X2", "X3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            2,
        );
        let rows = table1().unwrap();
        let gens = table1_generators(&rows, &vars, 3).unwrap();
        for (row, g) in rows.iter().zip(&gens) {
            assert_eq!(g.len(), row.count, "{}", row.text);
        }
    }

    #[test]
    fn assignment_constraints() {
        let form = parse_form("p1*x{i}^2*x{j}", 0).unwrap();
        let fam = letter_families(std::slice::from_ref(&form));
        assert_eq!(
            assignments(&form.letters(), &HashMap::new(), &fam, 3).len(),
            6
        );
        let form = parse_form("p1*x{i}^2*X{j}", 0).unwrap();
        let fam = letter_families(std::slice::from_ref(&form));
        assert_eq!(
            assignments(&form.letters(), &HashMap::new(), &fam, 3).len(),
            9
        );
    }

    #[test]
    fn element_parsing() {
        let g = parse_element("2,2,5,6,3,6;3,0", 9).unwrap();
        assert_eq!(g.label(), "(2,2,5,6,3,6;3,0)/9");
        assert_eq!(
            numerators_over(&g, 9).unwrap(),
            vec![2, 2, 5, 6, 3, 6, 3, 0]
        );
        assert_eq!(numerators_over(&g, 3), None);
        assert!(parse_element("1,2", 9).is_none());
    }
}
