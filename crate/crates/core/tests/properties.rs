//! Cross-module properties exercised through the public API.

use nash_atlas_core::doubles::{nash_double, BoundedModel};
use nash_atlas_core::drill::CenterSpec;
use nash_atlas_core::linalg::norm;
use nash_atlas_core::simplicial::{subdivide, Simplex};
use nash_atlas_core::weld::{blowup_origin, component_count, weld_sequence, OrthantSet, WeldStatus};
use nash_atlas_core::{q, Q};
use num_traits::Zero;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = OrthantSet> {
    (1usize..=4).prop_flat_map(|ell| {
        proptest::collection::btree_set(0u64..(1 << ell), 1..=(1usize << ell))
            .prop_map(move |masks| OrthantSet::from_masks(ell, masks).unwrap())
    })
}

fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #[test]
    fn weld_trace_never_increases(f in family()) {
        let t = weld_sequence(&f);
        prop_assert!(t.counts.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(t.counts[0], component_count(&f));
        prop_assert_eq!(t.status == WeldStatus::Connected, *t.counts.last().unwrap() == 1);
    }

    #[test]
    fn blowup_sign_pullback_is_an_involution(f in family(), pivot in 0usize..4) {
        prop_assume!(pivot < f.ell());
        let g = blowup_origin(&f, pivot).unwrap();
        prop_assert_eq!(g.len(), f.len());
        prop_assert_eq!(blowup_origin(&g, pivot).unwrap(), f);
    }

    #[test]
    fn subdivision_preserves_volume(
        n in 1usize..=3,
        coords in proptest::collection::vec(rational(), 16),
        facets in proptest::collection::btree_set(0usize..4, 1..=4),
    ) {
        let vs = (0..=n).map(|i| coords[i * n..(i + 1) * n].to_vec()).collect();
        let Ok(s) = Simplex::new(vs) else { return Ok(()) };
        let facets: Vec<usize> = facets.into_iter().filter(|&i| i <= n).collect();
        prop_assume!(!facets.is_empty());
        let parts = subdivide(&s, &facets).unwrap();
        let sum = parts.iter().map(|p| p.volume().unwrap()).fold(Q::zero(), |a, b| a + b);
        prop_assert_eq!(sum, s.volume().unwrap());
    }

    #[test]
    fn double_points_satisfy_the_equation(x in -1.5f64..1.5, y in -1.5f64..1.5) {
        let dbl = nash_double(&BoundedModel::disk(), 0).unwrap();
        if let Ok(fib) = dbl.fiber(&[x, y]) {
            for p in fib {
                let h = 1.0 - x * x - y * y;
                prop_assert!((p[2] * p[2] - h).abs() < 1e-9);
                prop_assert_eq!(dbl.involute(&dbl.involute(&p)), p);
            }
        }
    }

    #[test]
    fn drilled_directions_are_unit(y in -3.0f64..3.0, rho in -2.0f64..2.0, a in 0.0f64..std::f64::consts::TAU) {
        let spec = CenterSpec::trivial(3, 1).unwrap();
        let p = spec.phi(&[y], rho, &[a.cos(), a.sin()]).unwrap();
        prop_assert!((norm(&p.dir) - 1.0).abs() < 1e-12);
        let t = spec.psi0(&p).unwrap();
        prop_assert!((t.y[0] - y).abs() < 1e-9 && (t.rho - rho).abs() < 1e-9);
    }
}
