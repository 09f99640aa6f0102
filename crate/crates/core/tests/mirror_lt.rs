use std::collections::BTreeMap;

use num_traits::Zero;

use lgmodel::arith::Rational;
use lgmodel::chiral::{
    form_character, jacobi_quotient_slice, monomial_character, restricted_potential,
};
use lgmodel::mirror::{
    build_mirror_map, diff_against_table4, lt_assign, target_slice, MirrorError, Provenance,
    RowStatus,
};
use lgmodel::models;
use lgmodel::polycore::{build_superpotential, parse_compact_monomial};
use lgmodel::statespace::StateSpace;
use lgmodel::suite::Computed;
use lgmodel::symmetry::{FixedData, GroupElement, PermutationGroup};
use lgmodel::tables::{table1, table1_row_of, table4};

fn pair() -> (Computed, Computed) {
    (
        Computed::from_text("lt_sl", models::LT_SL).unwrap(),
        Computed::from_text("lt_j", models::LT_J).unwrap(),
    )
}

#[test]
fn seventy_three_pairs_full_rank() {
    let (src, tgt) = pair();
    let a = build_mirror_map(&src.space, &tgt.space).unwrap();
    assert_eq!(a.len(), 73);
    let slice = target_slice(&tgt.space).unwrap();
    assert_eq!(a.verify(slice, &src.space.vars).unwrap(), 73);
    let special = a
        .pairs
        .iter()
        .filter(|p| p.provenance == Provenance::SpecialCase)
        .count();
    assert_eq!(special, 7);
}

#[test]
fn images_are_invariant_classes_of_bidegree_21() {
    let (src, tgt) = pair();
    let a = build_mirror_map(&src.space, &tgt.space).unwrap();
    let id = FixedData::of(GroupElement::identity(6, 2));
    let weights = tgt.model.torus_weights();
    for p in &a.pairs {
        let m = p.target.monomial().unwrap();
        assert_eq!(m.p_degree(), 1);
        let tw: i64 = (0..8).map(|j| weights[j] * m.exp(j) as i64).sum();
        assert_eq!(tw, 0, "torus degree of {m:?}");
        for g in &tgt.group.generators {
            let ch = monomial_character(m, g) + form_character(g, &id);
            assert!(
                (ch.clone() - ch.floor()).is_zero(),
                "{m:?} not invariant under {g}"
            );
        }
    }
}

#[test]
fn corrupted_image_is_not_bijective() {
    let (src, tgt) = pair();
    let mut a = build_mirror_map(&src.space, &tgt.space).unwrap();
    a.pairs[5].target = a.pairs[2].target.clone();
    let slice = target_slice(&tgt.space).unwrap();
    match a.verify(slice, &src.space.vars) {
        Err(MirrorError::NotBijective { dependent }) => {
            assert_eq!(dependent, vec![a.pairs[5].source.render(&src.space.vars)]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn empty_source_gives_empty_assignment() {
    let (src, tgt) = pair();
    let empty = StateSpace {
        sectors: vec![],
        ..src.space.clone()
    };
    assert!(build_mirror_map(&empty, &tgt.space).unwrap().is_empty());
}

#[test]
fn wrong_model_is_rejected() {
    let q = Computed::from_text("quintic_sl", models::QUINTIC_SL).unwrap();
    let (_, tgt) = pair();
    assert!(matches!(
        build_mirror_map(&q.space, &tgt.space),
        Err(MirrorError::WrongModel(_))
    ));
}

#[test]
fn table4_diff_classification() {
    let (src, tgt) = pair();
    let a = build_mirror_map(&src.space, &tgt.space).unwrap();
    let slice = target_slice(&tgt.space).unwrap();
    let rep = diff_against_table4(&a, slice, &src.space.vars, &tgt.space.vars).unwrap();
    assert_eq!(rep.rows.len(), 73);
    assert!(rep.unlisted.is_empty());
    assert_eq!(rep.unexpected(), 0);
    let row = rep
        .rows
        .iter()
        .find(|r| r.source == "dt|(3,6,3,4,1,4;0,6)/9>")
        .unwrap();
    assert_eq!(row.printed, "p1x2X1X2");
    assert_eq!(row.derived.as_deref(), Some("p1x2X1X3"));
    assert!(matches!(row.status, RowStatus::DocumentedTypo(_)));
    let tdt = rep
        .rows
        .iter()
        .find(|r| r.source.starts_with("tdt"))
        .unwrap();
    assert_eq!(tdt.status, RowStatus::MatchByClass);
    assert_eq!(rep.matches(), 65);
    assert_eq!(rep.documented_typos(), 8);
}

/// Each misprinted monomial has the class of a different row's derived
/// image, so taking the table literally would not give a bijection.
#[test]
fn misprints_duplicate_other_rows() {
    let (src, tgt) = pair();
    let a = build_mirror_map(&src.space, &tgt.space).unwrap();
    let slice = target_slice(&tgt.space).unwrap();
    let vars = &tgt.space.vars;
    let images: Vec<Vec<Rational>> = a
        .pairs
        .iter()
        .map(|p| slice.coordinates(p.target.monomial().unwrap()).unwrap())
        .collect();
    let proportional = |u: &[Rational], v: &[Rational]| {
        let i = u.iter().position(|q| !q.is_zero()).unwrap();
        !v[i].is_zero() && u.iter().zip(v).all(|(x, y)| x * &v[i] == y * &u[i])
    };
    let mut typos = 0;
    for row in table4().unwrap().iter().filter(|r| r.note.is_some()) {
        typos += 1;
        let printed = parse_compact_monomial(&row.printed, vars).unwrap();
        let c = slice.coordinates(&printed).unwrap();
        let own = a
            .pairs
            .iter()
            .position(|p| p.source.element == row.element)
            .unwrap();
        let dup: Vec<usize> = (0..images.len())
            .filter(|&i| proportional(&c, &images[i]))
            .collect();
        assert_eq!(dup.len(), 1, "{}", row.printed);
        assert_ne!(dup[0], own);
    }
    assert_eq!(typos, 8);
}

#[test]
fn blocks_map_to_single_table1_rows() {
    let (src, tgt) = pair();
    let a = build_mirror_map(&src.space, &tgt.space).unwrap();
    let slice = target_slice(&tgt.space).unwrap();
    let perms = PermutationGroup::of_model(&src.model);
    let rows = table1().unwrap();
    let mut blocks: BTreeMap<GroupElement, Vec<usize>> = BTreeMap::new();
    for p in &a.pairs {
        let row = table1_row_of(p.target.monomial().unwrap(), slice, &tgt.space.vars, 3)
            .unwrap()
            .expect("image lies in a Table 1 family");
        blocks
            .entry(perms.orbit_type(&p.source.element))
            .or_default()
            .push(row);
    }
    for (key, hit) in &blocks {
        let size = hit.len();
        if size == 9 || size == 6 {
            assert!(
                hit.iter().all(|r| *r == hit[0]),
                "block {key} splits over rows {hit:?}"
            );
            assert_eq!(rows[hit[0]].count, size);
        } else {
            assert!(
                hit.iter().all(|r| rows[*r].count == 1),
                "block {key} hits {hit:?}"
            );
        }
    }
}

#[test]
fn rule_is_used_everywhere_else() {
    let (src, _) = pair();
    let labels = src.space.labels_at(1, 1);
    let rule = labels
        .iter()
        .filter(|l| matches!(lt_assign(l), Ok((_, Provenance::Rule))))
        .count();
    assert_eq!(rule, 66);
}

/// The printed cubics have a common singular point at (1,...,1): both
/// vanish there and their gradients are opposite.
#[test]
fn literal_cubics_are_singular() {
    let m = lgmodel::modelfile::parse_model_file(models::LT_J).unwrap();
    let one = vec![Rational::from_integer(1.into()); 6];
    for w in &m.polys {
        assert!(w.eval(&one, &[]).is_zero());
    }
    for j in 0..6 {
        let a = m.polys[0].partial(j).eval(&one, &[]);
        let b = m.polys[1].partial(j).eval(&one, &[]);
        assert!(!a.is_zero());
        assert_eq!(a, -b);
    }
}

/// Past the top degree the untwisted Jacobi ring of the literal model does
/// not vanish: it stabilises at one class per node.
#[test]
fn excess_classes_count_nodes() {
    for (text, want) in [(models::LT_J, 81), (models::LT_GENERIC_J, 0)] {
        let c = Computed::from_text("lt", text).unwrap();
        let wbar = build_superpotential(&c.model).unwrap();
        let fd = FixedData::of(GroupElement::identity(6, 2));
        let v = restricted_potential(&wbar, &fd);
        let s = jacobi_quotient_slice(&c.model, &v, &fd, 4, &c.group);
        assert_eq!(s.dimension, want);
    }
}

/// On the smooth member the same assignment is still a bijection.
#[test]
fn smooth_member_pair() {
    let src = Computed::from_text("lt_generic_sl", models::LT_GENERIC_SL).unwrap();
    let tgt = Computed::from_text("lt_generic_j", models::LT_GENERIC_J).unwrap();
    let a = build_mirror_map(&src.space, &tgt.space).unwrap();
    assert_eq!(a.len(), 73);
    for p in 0..=3 {
        for q in 0..=3 {
            assert_eq!(
                tgt.space.hodge(p, q),
                src.space.hodge(3 - p, q),
                "({p},{q})"
            );
        }
    }
}
