use pilotwave::fock::FockSpace;
use pilotwave::mode::BogoliubovParams;
use std::f64::consts::PI;

fn main() {
    // N-scaling at sigma=1, k=16: where does 1e-6 become reachable?
    for n in [128usize, 160, 192, 256, 320] {
        let space = FockSpace::new(n).unwrap();
        let p = BogoliubovParams::from_squeeze(1.0, 0.0, 0.0).unwrap();
        let s = space.squeeze_matrix(&p).unwrap();
        let diff = s.adjoint() * space.annihilation() * &s
            - (space.annihilation() * p.u() + space.creation() * p.v().conj());
        println!("sigma=1 N={n} k=16: {:.3e}", diff.view((0, 0), (16, 16)).norm());
    }
    // complex-v conventions at sigma=0.5 (in-budget)
    let space = FockSpace::new(128).unwrap();
    for theta_v in [0.0, PI / 3.0, -1.2] {
        let p = BogoliubovParams::from_squeeze(0.5, 0.4, theta_v).unwrap();
        let s = space.squeeze_matrix(&p).unwrap();
        let diff = s.adjoint() * space.annihilation() * &s
            - (space.annihilation() * p.u() + space.creation() * p.v().conj());
        println!("sigma=0.5 theta_u=0.4 theta_v={theta_v:.2} N=128 k=32: {:.3e}", diff.view((0, 0), (32, 32)).norm());
    }
}
