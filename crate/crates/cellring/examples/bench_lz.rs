// quick perf probe: one chaotic cell of the reduced complexity map
use cellring::complexity::complexity_spectrum;
use cellring::dynamics::{simulate, Convention, ModelParams, StateVector};
use std::time::Instant;

fn main() {
    let x0 = StateVector::new(vec![0.3, 0.5]).unwrap();
    // chaotic cell: expensive case
    for (r, p) in [(3.97_f64, 0.25_f64), (3.8, 0.5), (3.95, 0.5), (3.7, 0.9)] {
        let params = ModelParams::two_cell(r, 0.02, p).unwrap();
        let traj = simulate(&params, Convention::TwoCell, &x0, 3000, 1000).unwrap();
        let series = traj.component_series(0);
        let t = Instant::now();
        let spec = complexity_spectrum(&series).unwrap();
        println!("r={r} p={p}: K_m={:.4} in {:?}", spec.max_value, t.elapsed());
    }
    // and a strongly coupled (low complexity) cell
    let params = ModelParams::two_cell(3.9, 0.2, 0.5).unwrap();
    let traj = simulate(&params, Convention::TwoCell, &x0, 3000, 1000).unwrap();
    let series = traj.component_series(0);
    let t = Instant::now();
    let spec = complexity_spectrum(&series).unwrap();
    println!("c=0.2 cell: K_m={:.4} in {:?}", spec.max_value, t.elapsed());
}
