use std::sync::Arc;

use num_complex::Complex;
use proptest::prelude::*;

use genrest::classfun::{hc_induce, hc_restrict, induce, outer_tensor, restrict, ClassFunction};
use genrest::genericity::{gelfand_graev, generic_characters, whittaker_dim};
use genrest::groups::{EnumeratedGroup, GroupFamily, GroupKind, Reductive, ALL_FAMILIES};
use genrest::scalar::root_of_unity;
use genrest::tables::{dixon_table, gl2_table, levi_table, steinberg, IrreducibleTable};
use genrest::verify::GroupStore;

const TOL: f64 = 1e-8;

fn store() -> &'static GroupStore {
    static STORE: std::sync::OnceLock<GroupStore> = std::sync::OnceLock::new();
    STORE.get_or_init(|| GroupStore::new(None))
}

fn group(family: GroupFamily, q: u32) -> Reductive {
    store().group(family, q).unwrap()
}

fn close(a: Complex<f64>, b: Complex<f64>) -> bool {
    (a - b).norm() < TOL
}

/// The Borel as a group in its own right, indexed independently of `G`.
fn borel_group(red: &Reductive) -> Arc<EnumeratedGroup> {
    let g = &red.group;
    let family = g.kind().family();
    let elements = red.data.borel.iter().map(|&i| g.element(i).clone()).collect();
    Arc::new(
        EnumeratedGroup::from_elements(
            format!("B({})", g.label()),
            GroupKind::Family(family),
            family.composition(),
            family.simple_root_positions(),
            g.field().clone(),
            elements,
            None,
        )
        .unwrap(),
    )
}

fn frobenius_holds(g: &Arc<EnumeratedGroup>, theta: &ClassFunction<f64>, chi: &ClassFunction<f64>) -> bool {
    let b = theta.group();
    let up = induce(g, theta).unwrap().inner(chi).unwrap();
    let down = theta.inner(&restrict(chi, b).unwrap()).unwrap();
    close(up, down)
}

#[test]
fn frobenius_reciprocity_exhaustive_q2() {
    for family in ALL_FAMILIES {
        let red = group(family, 2);
        let b = borel_group(&red);
        let b_rows = dixon_table::<f64>(&b).unwrap();
        let g_rows = store().dixon(family, 2).unwrap();
        for (lb, theta) in b_rows.iter() {
            for (lg, chi) in g_rows.iter() {
                assert!(frobenius_holds(&red.group, theta, chi), "{family}: {lb} vs {lg}");
            }
        }
    }
}

struct Q3Tables {
    red: Reductive,
    b_rows: IrreducibleTable<f64>,
    g_rows: Arc<IrreducibleTable<f64>>,
}

fn q3_tables(family: GroupFamily) -> Q3Tables {
    let red = group(family, 3);
    let b_rows = dixon_table::<f64>(&borel_group(&red)).unwrap();
    let g_rows = store().dixon(family, 3).unwrap();
    Q3Tables { red, b_rows, g_rows }
}

fn family_strategy() -> impl Strategy<Value = GroupFamily> {
    prop::sample::select(ALL_FAMILIES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn frobenius_reciprocity_sampled_q3(family in family_strategy(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let t = q3_tables(family);
        let theta = &t.b_rows.rows()[i.index(t.b_rows.len())];
        let chi = &t.g_rows.rows()[j.index(t.g_rows.len())];
        prop_assert!(frobenius_holds(&t.red.group, theta, chi));
    }

    #[test]
    fn hc_adjunction_sampled_q3(family in family_strategy(), p in any::<prop::sample::Index>(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let red = group(family, 3);
        let proper: Vec<usize> = red.proper_parabolics().map(|(k, _)| k).collect();
        let k = proper[p.index(proper.len())];
        let m_rows = levi_table::<f64>(&red, k).unwrap();
        let g_rows = store().dixon(family, 3).unwrap();
        let sigma = &m_rows.rows()[i.index(m_rows.len())];
        let pi = &g_rows.rows()[j.index(g_rows.len())];
        prop_assert!(hc_adjoint(&red, k, sigma, pi));
    }
}

fn hc_adjoint(red: &Reductive, k: usize, sigma: &ClassFunction<f64>, pi: &ClassFunction<f64>) -> bool {
    let left = hc_induce(red, k, sigma).unwrap().inner(pi).unwrap();
    let right = sigma.inner(&hc_restrict(red, k, pi).unwrap()).unwrap();
    close(left, right)
}

#[test]
fn hc_adjunction_exhaustive_q2() {
    for family in ALL_FAMILIES {
        let red = group(family, 2);
        let g_rows = store().dixon(family, 2).unwrap();
        for (k, par) in red.proper_parabolics() {
            let m_rows = levi_table::<f64>(&red, k).unwrap();
            for (ls, sigma) in m_rows.iter() {
                for (lp, pi) in g_rows.iter() {
                    assert!(hc_adjoint(&red, k, sigma, pi), "{family} {}: {ls} vs {lp}", par.tag);
                }
            }
        }
    }
}

/// `t ↦ Π ζ^{e_i·log t_ii}` on the diagonal torus.
fn torus_character(torus: &Arc<EnumeratedGroup>, exps: &[u64]) -> ClassFunction<f64> {
    let f = torus.field().clone();
    let n = f.q() as u64 - 1;
    ClassFunction::from_representatives(torus.clone(), |m| {
        exps.iter()
            .enumerate()
            .map(|(i, &e)| root_of_unity::<f64>(e * f.log(m.get(i, i)).unwrap() as u64, n))
            .product()
    })
}

#[test]
fn hc_induction_is_transitive() {
    for q in [2, 3] {
        let red = group(GroupFamily::Gsp4, q);
        let b = red.borel_index();
        let torus = red.data.parabolics[b].levi.clone();
        let n = q as u64 - 1;
        for e0 in 0..n {
            for e1 in 0..n {
                for e2 in 0..n {
                    let theta = torus_character(&torus, &[e0, e1, e2]);
                    let direct = hc_induce(&red, b, &theta).unwrap();
                    for (k, par) in red.proper_parabolics().filter(|(k, _)| *k != b) {
                        let m = red.levi(k).unwrap();
                        let mb = m.borel_index();
                        let theta_m = torus_character(&m.data.parabolics[mb].levi, &[e0, e1, e2]);
                        let mid = hc_induce(&m, mb, &theta_m).unwrap();
                        let staged = hc_induce(&red, k, &mid).unwrap();
                        let d = direct.max_distance(&staged).unwrap();
                        assert!(d < TOL, "q={q} via {} ({e0},{e1},{e2}): {d}", par.tag);
                    }
                }
            }
        }
    }
}

#[test]
fn gelfand_graev_is_multiplicity_free() {
    for family in ALL_FAMILIES {
        for q in [2, 3] {
            let red = group(family, q);
            let rows = store().dixon(family, q).unwrap();
            let generic = generic_characters(&red).unwrap();
            assert!(!generic.is_empty());
            for psi in &generic {
                let gg = gelfand_graev::<f64>(psi).unwrap();
                let mults = rows.decompose(&gg).unwrap();
                assert!(mults.iter().all(|&m| m <= 1), "{family} q={q} {psi}: {mults:?}");
                // Constituents are exactly the rows with a psi-Whittaker vector.
                for (row, &m) in rows.rows().iter().zip(&mults) {
                    assert_eq!(whittaker_dim(row, psi).unwrap(), m);
                }
            }
        }
    }
}

#[test]
fn principal_series_of_trivial_has_one_whittaker_model() {
    let red = group(GroupFamily::Gsp4, 2);
    let b = red.borel_index();
    let ind = hc_induce(&red, b, &ClassFunction::<f64>::trivial(red.data.parabolics[b].levi.clone())).unwrap();
    for psi in generic_characters(&red).unwrap() {
        assert_eq!(whittaker_dim(&ind, &psi).unwrap(), 1, "{psi}");
    }
}

#[test]
fn steinberg_tensor_trivial_restricts_with_degree_two() {
    let gl2 = group(GroupFamily::Gl2, 2);
    let st = steinberg::<f64>(&gl2).unwrap();
    let one = ClassFunction::trivial(gl2.group.clone());
    let square = group(GroupFamily::Gl2Squared, 2);
    let para = group(GroupFamily::ParamodularLevi, 2);
    let st_one = outer_tensor(&square.group, &st, &one).unwrap();
    assert!(st_one.is_irreducible_character());
    let res = restrict(&st_one, &para.group).unwrap();
    assert!(close(res.degree(), Complex::new(2.0, 0.0)));
    // Still irreducible after restriction.
    assert!(res.is_irreducible_character());
}

#[test]
fn siegel_induction_degrees() {
    for q in [2, 3] {
        let red = group(GroupFamily::Gsp4, q);
        let (k, par) = red.parabolic("siegel").unwrap();
        let index = red.group.order() / par.members.len();
        for (label, sigma) in levi_table::<f64>(&red, k).unwrap().iter() {
            let ind = hc_induce(&red, k, sigma).unwrap();
            let want = sigma.degree() * index as f64;
            assert!(close(ind.degree(), want), "q={q} {label}");
        }
    }
}

#[test]
fn single_precision_agrees() {
    for q in [2, 3, 5] {
        let red = group(GroupFamily::Gl2, q);
        let wide = gl2_table::<f64>(&red.group).unwrap();
        let narrow = gl2_table::<f32>(&red.group).unwrap();
        narrow.check_orthogonality(1e-4).unwrap();
        assert_eq!(wide.degrees().unwrap(), narrow.degrees().unwrap());
        for (a, b) in wide.rows().iter().zip(narrow.rows()) {
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x.re - y.re as f64).abs() < 1e-5 && (x.im - y.im as f64).abs() < 1e-5);
            }
        }
        let dixon = dixon_table::<f32>(&red.group).unwrap();
        narrow.match_up_to_permutation(&dixon).unwrap();
        for psi in generic_characters(&red).unwrap() {
            for (w, n) in wide.rows().iter().zip(narrow.rows()) {
                assert_eq!(whittaker_dim(w, &psi).unwrap(), whittaker_dim(n, &psi).unwrap());
            }
        }
    }
}
