fn main() {
    for t in [1.0, 0.1, 1e-3, 1e-6, 1e-8, 10.0, 50.0, 100.0] {
        let start = std::time::Instant::now();
        let v = pi2d_core::specfun::volterra_i(t).unwrap();
        let nu = pi2d_core::specfun::volterra_nu0(t).unwrap();
        println!("t={t:.0e} I={v:.12e} nu={nu:.12e}  [{:?}]", start.elapsed());
    }
}
