use std::f64::consts::PI;

use wp_oracle::{fd_resolvent, DirectOracle, DirectSettings, FdGrid};

const T1111: f64 = 11.0 / (60.0 * PI);

#[test]
fn fd_route_reproduces_t1111() {
    let amp2 = 3.0 / (4.0 * PI);
    let source = |x: f64| amp2 * (1.0 - x).powi(4);
    let sol = fd_resolvent(source, 0, FdGrid::new(40_000)).unwrap();
    let t = sol.pair_with(source);
    assert!((t - T1111).abs() < 1e-6, "{t} vs {T1111}");
}

#[test]
fn direct_moments_respect_symmetries() {
    let o = DirectOracle::build(2, DirectSettings::default()).unwrap();
    let idx = [1usize, 2];
    for &a in &idx {
        for &b in &idx {
            for &c in &idx {
                for &d in &idx {
                    let t = o.moment(a, b, c, d);
                    assert!(t.im.abs() < 1e-10);
                    assert!((t - o.moment(c, d, a, b)).norm() < 1e-8);
                    assert!((t - o.moment(b, a, d, c)).norm() < 1e-8);
                    if (a as i64 - b as i64) + (c as i64 - d as i64) != 0 {
                        assert!(t.norm() < 1e-12);
                    }
                }
            }
        }
    }
}
