use std::ffi::{CStr, CString};
use std::ptr;

use otto_ffi::*;

fn last_error() -> String {
    let p = otto_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn entries(rho: *const OttoDensity) -> Vec<f64> {
    let mut dim = 0usize;
    unsafe {
        assert_eq!(otto_density_dim(rho, &mut dim), OttoStatus::Ok);
        let mut buf = vec![0.0; 2 * dim * dim];
        assert_eq!(otto_density_entries(rho, buf.as_mut_ptr(), buf.len()), OttoStatus::Ok);
        buf
    }
}

#[test]
fn thermal_state_entries() {
    let mut rho = ptr::null_mut();
    unsafe {
        assert_eq!(otto_density_thermal(3.0, &mut rho), OttoStatus::Ok);
        let e = entries(rho);
        let t = 3f64.tanh();
        let expected = [0.5, 0.0, 0.0, t / 2.0, 0.0, -t / 2.0, 0.5, 0.0];
        for (a, b) in e.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let mut small = [0.0; 4];
        assert_eq!(otto_density_entries(rho, small.as_mut_ptr(), 4), OttoStatus::BufferTooSmall);
        otto_density_free(rho);
    }
}

#[test]
fn invalid_inputs_report_errors() {
    let mut rho = ptr::null_mut();
    unsafe {
        assert_eq!(otto_density_thermal(-1.0, &mut rho), OttoStatus::InvalidArgument);
        assert!(rho.is_null());
        assert!(last_error().contains("x"));
        assert_eq!(otto_density_thermal(1.0, ptr::null_mut()), OttoStatus::NullPointer);
        let bad = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        assert_eq!(otto_density_from_entries(2, bad.as_ptr(), &mut rho), OttoStatus::InvalidState);
        assert_eq!(otto_density_from_entries(3, bad.as_ptr(), &mut rho), OttoStatus::InvalidArgument);
        assert_eq!(otto_density_from_entries(2, ptr::null(), &mut rho), OttoStatus::NullPointer);
        otto_density_free(ptr::null_mut());
        otto_string_free(ptr::null_mut());
    }
}

#[test]
fn dephasing_and_measures() {
    let mut rc = ptr::null_mut();
    let mut mixed = ptr::null_mut();
    let mut dephased = ptr::null_mut();
    unsafe {
        assert_eq!(otto_density_right_circular(&mut rc), OttoStatus::Ok);
        assert_eq!(otto_density_thermal(0.0, &mut mixed), OttoStatus::Ok);
        assert_eq!(otto_dephase(rc, std::f64::consts::FRAC_PI_4, &mut dephased), OttoStatus::Ok);
        let mut f = 0.0;
        assert_eq!(otto_fidelity(dephased, mixed, &mut f), OttoStatus::Ok);
        assert!((f - 1.0).abs() < 1e-12);
        let mut s = 0.0;
        assert_eq!(otto_entropy(dephased, &mut s), OttoStatus::Ok);
        assert!((s - 2f64.ln()).abs() < 1e-12);
        assert_eq!(otto_relative_entropy(mixed, rc, &mut s), OttoStatus::Support);
        assert_eq!(otto_dephase(rc, 1.0, &mut dephased), OttoStatus::InvalidArgument);
        for p in [rc, mixed, dephased] {
            otto_density_free(p);
        }
    }
}

#[test]
fn program_round_trip_and_run() {
    let src = CString::new(include_str!("../../core/circuits/otto_cycle.otto")).unwrap();
    let mut program = ptr::null_mut();
    let mut execution = ptr::null_mut();
    unsafe {
        assert_eq!(otto_program_parse(src.as_ptr(), &mut program), OttoStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(otto_program_format(program, &mut text), OttoStatus::Ok);
        assert!(CStr::from_ptr(text).to_str().unwrap().starts_with("init rc\ntomo TA\n"));
        otto_string_free(text);

        assert_eq!(otto_program_run(program, &mut execution), OttoStatus::Ok);
        let mut count = 0;
        assert_eq!(otto_execution_snapshot_count(execution, &mut count), OttoStatus::Ok);
        assert_eq!(count, 5);
        let label = CString::new("TC").unwrap();
        let mut tc = ptr::null_mut();
        assert_eq!(otto_execution_snapshot(execution, label.as_ptr(), &mut tc), OttoStatus::Ok);
        let e = entries(tc);
        assert!((e[3] - 0.5 * std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let missing = CString::new("TZ").unwrap();
        assert_eq!(
            otto_execution_snapshot(execution, missing.as_ptr(), &mut tc),
            OttoStatus::InvalidArgument
        );
        otto_density_free(tc);
        otto_execution_free(execution);
        otto_program_free(program);

        let bad = CString::new("pd 50\nfoo\n").unwrap();
        assert_eq!(otto_program_parse(bad.as_ptr(), &mut program), OttoStatus::Parse);
        let message = last_error();
        assert!(message.contains("1:4") && message.contains("2:1"), "{message}");
        let ipd = CString::new("init rc\nipd 3").unwrap();
        assert_eq!(otto_program_parse(ipd.as_ptr(), &mut program), OttoStatus::Ok);
        assert_eq!(otto_program_run(program, &mut execution), OttoStatus::Compile);
        otto_program_free(program);
    }
}

#[test]
fn cycle_and_sweep() {
    unsafe {
        let mut cycle = OttoCycle::default();
        assert_eq!(otto_run_cycle(45.0, 2.0, 3.0, &mut cycle), OttoStatus::Ok);
        assert_eq!(cycle.r, 0.0);
        assert!((cycle.w_extracted - 3f64.tanh()).abs() < 1e-12);

        let mut closed = [0.0; 4];
        assert_eq!(otto_closed_form(0.0, 2.0, 3.0, closed.as_mut_ptr()), OttoStatus::Ok);
        assert!((closed[0] - cycle.w_ab).abs() < 1e-12 && (closed[1] - cycle.q_bc).abs() < 1e-12);
        assert_eq!(otto_closed_form(2.0, 2.0, 3.0, closed.as_mut_ptr()), OttoStatus::InvalidArgument);

        let mut report = ptr::null_mut();
        assert_eq!(otto_sweep(ptr::null(), 0, 2.0, 3.0, 0.0, 0, &mut report), OttoStatus::Ok);
        let mut rows = 0;
        assert_eq!(otto_report_row_count(report, &mut rows), OttoStatus::Ok);
        assert_eq!(rows, 7);
        assert_eq!(otto_report_row(report, 6, &mut cycle), OttoStatus::Ok);
        assert_eq!(cycle.r, 1.0);
        assert_eq!(otto_report_row(report, 7, &mut cycle), OttoStatus::InvalidArgument);
        let mut csv = ptr::null_mut();
        assert_eq!(otto_report_emit(report, OttoFormat::Csv, &mut csv), OttoStatus::Ok);
        let text = CStr::from_ptr(csv).to_str().unwrap().to_string();
        otto_string_free(csv);
        assert_eq!(text, include_str!("../../core/tests/golden/default_sweep.csv"));
        otto_report_free(report);

        let bad = [50.0];
        assert_eq!(otto_sweep(bad.as_ptr(), 1, 2.0, 3.0, 0.0, 0, &mut report), OttoStatus::InvalidArgument);
    }
}

#[test]
fn tomography_reconstruction() {
    let mut rho = ptr::null_mut();
    let mut projected = -1;
    unsafe {
        let rc = [0.5, 0.5, 0.5, 0.5, 0.0, 1.0];
        assert_eq!(otto_tomography_reconstruct(rc.as_ptr(), &mut rho, &mut projected), OttoStatus::Ok);
        assert_eq!(projected, 0);
        let e = entries(rho);
        assert!((e[3] - 0.5).abs() < 1e-15);
        otto_density_free(rho);

        let over = [0.9, 0.1, 0.9, 0.1, 0.5, 0.5];
        assert_eq!(otto_tomography_reconstruct(over.as_ptr(), &mut rho, ptr::null_mut()), OttoStatus::Ok);
        otto_density_free(rho);

        let dark = [0.0, 0.0, 0.5, 0.5, 0.5, 0.5];
        assert_eq!(otto_tomography_reconstruct(dark.as_ptr(), &mut rho, &mut projected), OttoStatus::Tomography);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(otto_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
