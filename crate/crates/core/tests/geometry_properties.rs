use phan_core::cover::{build_cover, lift_path, Cover};
use phan_core::geometry::{basis_from_chamber, build_gamma, build_pi, chamber_from_basis, standard_pi_pair, Geometry};
use phan_core::groups::{random_flag, sp_group, FinGroup};
use phan_core::homotopy::{pi1_presentation, random_cycle, reduce_to_point_line, Pi1Presentation};
use phan_core::SymplecticSpace;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn gamma(n: usize, p: u8) -> Geometry {
    build_gamma(&SymplecticSpace::standard(n, p).unwrap()).unwrap()
}

fn gamma42() -> &'static Geometry {
    static G: OnceLock<Geometry> = OnceLock::new();
    G.get_or_init(|| gamma(4, 2))
}

fn gamma52() -> &'static Geometry {
    static G: OnceLock<Geometry> = OnceLock::new();
    G.get_or_init(|| gamma(5, 2))
}

fn gamma43() -> &'static Geometry {
    static G: OnceLock<Geometry> = OnceLock::new();
    G.get_or_init(|| gamma(4, 3))
}

struct CoverData {
    cover: Cover,
    pr: Pi1Presentation,
    swaps: Vec<bool>,
}

fn cover62() -> &'static CoverData {
    static C: OnceLock<CoverData> = OnceLock::new();
    C.get_or_init(|| {
        let sp = SymplecticSpace::standard(6, 2).unwrap();
        let (p, h) = standard_pi_pair(&sp);
        let base = build_pi(&sp, &p, &h).unwrap();
        let cover = build_cover(&base).unwrap();
        let pr = pi1_presentation(&cover.base, 0).unwrap();
        let start = cover.lifts[0][0];
        let swaps = (0..pr.presentation.generators)
            .map(|k| {
                let walk = pr.generator_walk(k).unwrap();
                *lift_path(&cover, &walk, start).unwrap().last().unwrap() != start
            })
            .collect();
        CoverData { cover, pr, swaps }
    })
}

fn sp43() -> &'static FinGroup {
    static G: OnceLock<FinGroup> = OnceLock::new();
    G.get_or_init(|| sp_group(&SymplecticSpace::standard(4, 3).unwrap(), 100_000).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn point_line_reduction_verifies(seed in any::<u64>(), steps in 2usize..30, odd in any::<bool>()) {
        let g = if odd { gamma52() } else { gamma42() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_cycle(g, 0, steps, &mut rng).unwrap();
        let r = reduce_to_point_line(g, &c).unwrap();
        prop_assert!(r.verify(g, &c));
    }

    #[test]
    fn chamber_round_trip(seed in any::<u64>()) {
        let g = gamma43();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_flag(g, &[0, 1, 2], &mut rng).unwrap();
        let hb = basis_from_chamber(g, &c).unwrap();
        prop_assert!(hb.is_valid(g.ambient().unwrap()));
        prop_assert_eq!(chamber_from_basis(g, &hb).unwrap(), c);
    }

    /// A base cycle lifts to a closed walk exactly when its word uses the
    /// fiber-swapping generators an even number of times.
    #[test]
    fn lift_closes_iff_even_swaps(seed in any::<u64>(), steps in 2usize..40) {
        let d = cover62();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_cycle(&d.cover.base, 0, steps, &mut rng).unwrap();
        let w = d.pr.cycle_word(&c).unwrap();
        let swaps = w.iter().filter(|&&l| d.swaps[l.unsigned_abs() as usize - 1]).count();
        let start = d.cover.lifts[0][0];
        let lift = lift_path(&d.cover, c.ids(), start).unwrap();
        prop_assert_eq!(*lift.last().unwrap() == start, swaps % 2 == 0);
        for s in lift.windows(2) {
            prop_assert!(d.cover.geometry.incident(s[0], s[1]));
        }
    }

    #[test]
    fn group_table_matches_matrices(a in 0usize..51840, b in 0usize..51840) {
        let g = sp43();
        let ab = g.mul(a, b);
        prop_assert_eq!(g.element(ab), &g.element(a).mul(g.element(b)));
        prop_assert!(g.element(g.mul(a, g.inv(a))).is_identity());
    }
}
