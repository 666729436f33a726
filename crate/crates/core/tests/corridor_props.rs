mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vistrack::bernstein::Vec2;
use vistrack::corridor::{build_corridor, CorridorError, CorridorParams};
use vistrack::geom::{Aabb, Obstacle};

fn world(seed: u64) -> (Vec2, vistrack::bernstein::Curve2, Vec<Obstacle>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = random_target(&mut rng, 1.5);
    let agent = around(&mut rng, target.first(), 0.3, 1.2);
    let n = rng.random_range(0..12);
    let obstacles = (0..n)
        .map(|_| {
            let c = around(&mut rng, target.first(), 0.3, 3.0);
            if rng.random_bool(0.5) {
                Obstacle::disc(c, rng.random_range(0.05..0.4)).unwrap()
            } else {
                Obstacle::aabb(c, c + v(rng.random_range(0.1..0.8), rng.random_range(0.1..0.8))).unwrap()
            }
        })
        .collect();
    (agent, target, obstacles)
}

fn params(windows: usize) -> CorridorParams {
    CorridorParams { windows, inflate: 1.2, clearance: R_C }
}

fn bounds() -> Aabb {
    Aabb::new(v(-8.0, -8.0), v(8.0, 8.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn regions_contain_the_seeds_and_keep_clear(seed in any::<u64>(), windows in 1usize..5) {
        let (agent, target, obstacles) = world(seed);
        let Ok(corridor) = build_corridor(&agent, &target, &obstacles, &params(windows), &bounds()) else {
            return Ok(());
        };
        prop_assert_eq!(corridor.len(), windows);
        let segs = corridor.segments();
        prop_assert_eq!(segs[0].start, 0.0);
        prop_assert!((segs[windows - 1].end - 1.5).abs() < 1e-12);
        prop_assert!(segs.windows(2).all(|w| w[0].end == w[1].start));
        for seg in segs {
            prop_assert!(seg.region.contains(&agent));
            for k in 0..=20 {
                let t = seg.start + (seg.end - seg.start) * k as f64 / 20.0;
                prop_assert!(seg.region.contains(&target.at(t)), "target outside its window at t = {t}");
            }
            // every region point keeps the clearance, every eroded point twice it
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
            let vs = seg.region.vertices();
            for _ in 0..200 {
                let w: Vec<f64> = vs.iter().map(|_| rng.random_range(0.0..1.0f64)).collect();
                let total: f64 = w.iter().sum();
                let p = vs.iter().zip(&w).fold(Vec2::zeros(), |acc, (x, wk)| acc + x * (wk / total));
                let clearance = obstacles.iter().map(|o| o.distance_to_point(&p)).fold(f64::INFINITY, f64::min);
                prop_assert!(clearance >= R_C - 1e-9, "region point {p:?} only {clearance} from an obstacle");
                if seg.eroded.contains(&p) {
                    prop_assert!(clearance >= 2.0 * R_C - 1e-9);
                    prop_assert!(seg.region.contains_disc(&p, R_C - 1e-9));
                }
            }
            for vtx in seg.eroded.vertices() {
                prop_assert!(seg.region.contains_disc(vtx, R_C - 1e-9));
            }
        }
    }

    #[test]
    fn window_lookup_matches_the_segments(seed in any::<u64>(), s in 0.0..=1.0f64) {
        let (agent, target, _) = world(seed);
        let corridor = build_corridor(&agent, &target, &[], &params(3), &bounds()).unwrap();
        let t = s * 1.5;
        let w = corridor.window_at(t);
        let seg = &corridor.segments()[w];
        prop_assert!(seg.start <= t && (t < seg.end || w == 2));
        prop_assert_eq!(corridor.breakpoints().len(), 2);
    }
}

#[test]
fn agent_inside_an_obstacle_is_reported() {
    let target = vistrack::bernstein::Curve2::constant(v(1.0, 0.0), 1.5);
    let obstacle = Obstacle::disc(v(0.0, 0.05), 0.1).unwrap();
    let err = build_corridor(&v(0.0, 0.0), &target, &[obstacle], &params(3), &bounds()).unwrap_err();
    assert!(matches!(err, CorridorError::AgentInObstacle { obstacle: 0, .. }));
    assert_eq!(build_corridor(&v(0.0, 0.0), &target, &[], &params(0), &bounds()), Err(CorridorError::NoWindows));
}

#[test]
fn obstacle_between_agent_and_target_blocks() {
    let target = vistrack::bernstein::Curve2::constant(v(2.0, 0.0), 1.5);
    let wall = Obstacle::aabb(v(0.9, -1.0), v(1.1, 1.0)).unwrap();
    let err = build_corridor(&v(0.0, 0.0), &target, &[wall], &params(2), &bounds()).unwrap_err();
    assert!(matches!(err, CorridorError::Blocked { obstacle: 0, .. }));
}

#[test]
fn leaving_the_bounds_is_reported() {
    let target = vistrack::bernstein::Curve2::constant(v(9.0, 0.0), 1.5);
    let err = build_corridor(&v(7.5, 0.0), &target, &[], &params(1), &bounds()).unwrap_err();
    assert!(matches!(err, CorridorError::OutOfBounds { window: 0 }));
}

/// Guards the property above against vacuity.
#[test]
fn most_random_worlds_build() {
    let built = (0..300u64)
        .filter(|&s| {
            let (agent, target, obstacles) = world(s);
            build_corridor(&agent, &target, &obstacles, &params(3), &bounds()).is_ok()
        })
        .count();
    assert!(built > 150, "only {built}/300 corridors built");
}
