mod common;

use common::{brute_force_minima, corpus, decimal, fixture, random_unimodular};
use heightbound::lattice::{build_lattice, form_value, minkowski_check, regulator, successive_minima, HeightLattice};
use heightbound::verdict::Verdict;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn lattices() -> Vec<(String, HeightLattice)> {
    corpus()
        .into_iter()
        .map(|(label, min, gens, _)| (label, build_lattice(&min, &gens, 1e-25).unwrap()))
        .collect()
}

#[test]
fn regulators_match_reference_table() {
    let table = fixture("regulators.json");
    let lats = lattices();
    for (row, (label, lat)) in table.as_array().unwrap().iter().zip(&lats) {
        assert_eq!(row["label"].as_str().unwrap(), label);
        assert_eq!(row["rank"].as_u64().unwrap() as usize, lat.m);
        let r = regulator(lat).unwrap();
        let want = decimal(row["reg_l"].as_str().unwrap(), 256);
        assert!(
            r.reg_l.overlaps(&want),
            "{label}: {} vs {}",
            r.reg_l.mid_to_sci(30),
            row["reg_l"]
        );
        if lat.m == 0 {
            assert!(r.reg_l.is_exact() && r.reg_l.mid_f64() == 1.0);
        }
        let scaled = r.reg_l.mul_pow2(lat.m as i64);
        assert_eq!(r.reg_poincare.mid_dyadic(), scaled.mid_dyadic());
        assert_eq!(r.reg_poincare.rad(), scaled.rad());
        assert_eq!(minkowski_check(&r).verdict, Verdict::Pass, "{label}");
    }
}

#[test]
fn invariant_under_basis_change() {
    let mut rng = StdRng::seed_from_u64(7);
    for (label, lat) in lattices().into_iter().filter(|(_, l)| l.m > 0) {
        let base = regulator(&lat).unwrap();
        for _ in 0..20 {
            let u = random_unimodular(&mut rng, lat.m);
            let moved = lat.change_basis(&u);
            let r = regulator(&moved).unwrap();
            assert!(r.reg_l.overlaps(&base.reg_l), "{label} {u:?}");
            for (a, b) in r.minima_sq.iter().zip(&base.minima_sq) {
                assert!(a.overlaps(b), "{label} {u:?}");
            }
        }
    }
}

#[test]
fn minima_match_exhaustive_search() {
    for (label, lat) in lattices().into_iter().filter(|(_, l)| (1..=3).contains(&l.m)) {
        let mn = successive_minima(&lat, 25).unwrap();
        let bf = brute_force_minima(&lat.gram, 50);
        for ((v, val), want) in mn.vectors.iter().zip(&mn.values).zip(&bf) {
            assert!(
                (val.mid_f64() - want).abs() <= 1e-12 * want.abs(),
                "{label}: {} vs {want}",
                val.mid_f64()
            );
            assert!(form_value(&lat.gram, v).overlaps(val));
        }
    }
}
