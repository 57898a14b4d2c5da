//! Exercise the C entry points through the extern ABI and check them against
//! the core crate.

use cellring_ffi::*;
use std::ptr;

unsafe fn make_two_cell(r: f64, c: f64, p: f64) -> *mut CellringParams {
    let mut handle: *mut CellringParams = ptr::null_mut();
    let status = cellring_params_two_cell(r, c, p, &mut handle);
    assert_eq!(status, CellringStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn version_is_a_c_string() {
    let v = cellring_version();
    assert!(!v.is_null());
    let s = unsafe { std::ffi::CStr::from_ptr(v) }.to_str().unwrap();
    assert!(s.contains('.'));
}

#[test]
fn params_lifecycle_and_validation() {
    unsafe {
        let handle = make_two_cell(3.8, 0.02, 0.5);
        assert_eq!(cellring_params_n_cells(handle), 2);
        cellring_params_free(handle);

        // out-of-range r is rejected with a message naming the bound
        let mut bad: *mut CellringParams = ptr::null_mut();
        let status = cellring_params_two_cell(5.0, 0.02, 0.5, &mut bad);
        assert_eq!(status, CellringStatus::InvalidArgument);
        assert!(bad.is_null());
        let mut buf = vec![0i8; 256];
        let len = cellring_last_error(buf.as_mut_ptr(), buf.len());
        assert!(len > 0);
        let msg = std::ffi::CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert!(msg.contains("0 < r <= 4"), "{msg}");

        // per-cell constructor
        let coupling = [0.3, 0.4, 0.5];
        let affinities = [0.2, 0.3, 0.5];
        let mut ring: *mut CellringParams = ptr::null_mut();
        let status = cellring_params_ring(
            3.5,
            coupling.as_ptr(),
            affinities.as_ptr(),
            3,
            &mut ring,
        );
        assert_eq!(status, CellringStatus::Ok);
        assert_eq!(cellring_params_n_cells(ring), 3);
        cellring_params_free(ring);

        cellring_params_free(ptr::null_mut()); // no-op
    }
}

#[test]
fn simulate_matches_core_crate() {
    unsafe {
        let handle = make_two_cell(3.8, 0.02, 0.5);
        let x0 = [0.3, 0.5];
        let kept = 40;
        let mut out = vec![0.0f64; kept * 2];
        let status = cellring_simulate(
            handle,
            CellringConvention::TwoCell,
            x0.as_ptr(),
            50,
            10,
            out.as_mut_ptr(),
            ptr::null_mut(),
        );
        assert_eq!(status, CellringStatus::Ok);

        let params = cellring::dynamics::ModelParams::two_cell(3.8, 0.02, 0.5).unwrap();
        let x0v = cellring::dynamics::StateVector::new(x0.to_vec()).unwrap();
        let traj = cellring::dynamics::simulate(
            &params,
            cellring::dynamics::Convention::TwoCell,
            &x0v,
            50,
            10,
        )
        .unwrap();
        for (i, state) in traj.states.iter().enumerate() {
            assert_eq!(out[i * 2], state[0]);
            assert_eq!(out[i * 2 + 1], state[1]);
        }
        cellring_params_free(handle);
    }
}

#[test]
fn simulate_escape_reports_step() {
    unsafe {
        let handle = make_two_cell(4.0, 0.0, 0.5);
        let x0 = [0.5, 0.3];
        let mut out = vec![0.0f64; 10 * 2];
        let mut step = 0usize;
        let status = cellring_simulate(
            handle,
            CellringConvention::TwoCell,
            x0.as_ptr(),
            10,
            0,
            out.as_mut_ptr(),
            &mut step,
        );
        assert_eq!(status, CellringStatus::RangeEscape);
        assert_eq!(step, 1);
        cellring_params_free(handle);
    }
}

#[test]
fn complexity_entry_points() {
    unsafe {
        let series: Vec<f64> = (0..256)
            .map(|i| {
                let x = i as f64 / 256.0;
                (x * 37.0).sin().abs()
            })
            .collect();
        let mut kc = 0.0f64;
        assert_eq!(
            cellring_kc_single(series.as_ptr(), series.len(), &mut kc),
            CellringStatus::Ok
        );
        assert_eq!(kc, cellring::complexity::kc_single(&series).unwrap());

        let mut values = vec![0.0f64; series.len()];
        let mut max = 0.0f64;
        let mut max_index = 0usize;
        assert_eq!(
            cellring_spectrum(
                series.as_ptr(),
                series.len(),
                values.as_mut_ptr(),
                &mut max,
                &mut max_index
            ),
            CellringStatus::Ok
        );
        let spec = cellring::complexity::complexity_spectrum(&series).unwrap();
        assert_eq!(values, spec.values);
        assert_eq!(max, spec.max_value);
        assert_eq!(max_index, spec.max_index);

        // degenerate input surfaces as InvalidArgument
        assert_eq!(
            cellring_kc_single(series.as_ptr(), 1, &mut kc),
            CellringStatus::InvalidArgument
        );
    }
}

#[test]
fn stability_entry_points() {
    unsafe {
        let handle = make_two_cell(4.0, 0.02, 0.5);
        let mut report = CellringStabilityReport {
            eigen_max: 0.0,
            eigen_min: 0.0,
            margin: 0.0,
            spectral_radius: 0.0,
            infinity_norm: 0.0,
            classification: -1,
            in_region_s: 0,
        };
        assert_eq!(
            cellring_two_cell_stability(handle, 0.5, 0.5, &mut report),
            CellringStatus::Ok
        );
        assert_eq!(report.classification, 0);
        assert_eq!(report.in_region_s, 1);
        assert!(report.eigen_max < 0.1);

        let mut member = 0u8;
        let eq = [0.5, 0.5];
        assert_eq!(
            cellring_region_s_membership(handle, eq.as_ptr(), &mut member),
            CellringStatus::Ok
        );
        assert_eq!(member, 1);

        // boundary equilibrium is a numerical failure, not a success
        assert_eq!(
            cellring_two_cell_stability(handle, 0.0, 0.5, &mut report),
            CellringStatus::NumericalFailure
        );
        cellring_params_free(handle);
    }
}

#[test]
fn spectral_radius_entry_point() {
    unsafe {
        let m = [0.2, 0.0, 0.0, 0.0, -0.7, 0.0, 0.0, 0.0, 0.5];
        let mut rho = 0.0f64;
        assert_eq!(
            cellring_spectral_radius(m.as_ptr(), 3, &mut rho),
            CellringStatus::Ok
        );
        assert!((rho - 0.7).abs() < 1e-12);
    }
}

#[test]
fn generated_header_exists_with_expected_symbols() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/cellring.h");
    let text = std::fs::read_to_string(header).expect("cbindgen header present");
    for symbol in [
        "cellring_version",
        "cellring_params_two_cell",
        "cellring_params_ring",
        "cellring_params_free",
        "cellring_simulate",
        "cellring_kc_single",
        "cellring_spectrum",
        "cellring_two_cell_stability",
        "cellring_region_s_membership",
        "cellring_spectral_radius",
        "cellring_last_error",
        "CellringStatus",
        "CellringParams",
    ] {
        assert!(text.contains(symbol), "header missing {symbol}");
    }
}
