mod common;

use gapscope::gaps::default_eps;
use gapscope::graphs::{
    boshernitzan_bound_check, ggaps_build, outdegree_identity_check, verify_forest,
    verify_ghost_bound, verify_glue,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut fails = Vec::new();
    for k in 0..300 {
        let d = rng.random_range(2..=5);
        let n = rng.random_range(2..=500);
        let t = common::random_keane_iet(&mut rng, d, 1000);
        let eps = default_eps(n);
        let g = ggaps_build(&t, n).unwrap();
        assert!(g.excess() < d as isize);
        for (name, out) in [
            ("outdeg", outdegree_identity_check(&t, n)),
            ("bosh", boshernitzan_bound_check(&t, n)),
            ("forest", verify_forest(&t, n, eps)),
            ("glue", verify_glue(&t, n)),
            ("ghost", verify_ghost_bound(&t, n, eps)),
        ] {
            match out {
                Ok(o) if !o.failed() => {}
                other => fails.push(format!("{k} {name} d={d} n={n}: {other:?}")),
            }
        }
    }
    assert!(fails.is_empty(), "{}\n{}", fails.len(), fails.join("\n"));
}
