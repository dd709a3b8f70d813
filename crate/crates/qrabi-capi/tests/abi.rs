//! Exercise the exported C surface through the same signatures a foreign
//! caller would use.

use qrabi_capi::*;

#[test]
fn params_lifecycle() {
    let p = qrabi_params_new(1.0, 0.1, 1.0, 0.2);
    assert!(!p.is_null());
    unsafe { qrabi_params_free(p) };
    // invalid input yields NULL instead of a handle
    assert!(qrabi_params_new(1.0, 0.0, 0.0, 0.2).is_null());
    assert!(qrabi_params_new(1.0, 0.0, 1.0, -0.5).is_null());
    unsafe { qrabi_params_free(std::ptr::null_mut()) };
}

#[test]
fn ground_energy_matches_library() {
    let p = qrabi_params_new(1.0, 0.5, 1.0, 0.6);
    let mut e = f64::NAN;
    let status = unsafe { qrabi_bgrwa_ground_energy(p, &mut e) };
    assert_eq!(status, QrabiStatus::Ok);
    let params = qrabi::ModelParams::new(1.0, 0.5, 1.0, 0.6).unwrap();
    assert!((e - qrabi::bgrwa::ground_energy(&params)).abs() < 1e-15);
    unsafe { qrabi_params_free(p) };
}

#[test]
fn levels_across_engines_agree_at_zero_coupling() {
    let p = qrabi_params_new(1.0, 0.3, 1.0, 0.0);
    let mut closed = [0.0; 6];
    let mut ed = [0.0; 6];
    unsafe {
        assert_eq!(
            qrabi_levels(p, 0, closed.len(), 0, closed.as_mut_ptr()),
            QrabiStatus::Ok
        );
        assert_eq!(
            qrabi_levels(p, 1, ed.len(), 0, ed.as_mut_ptr()),
            QrabiStatus::Ok
        );
    }
    for (a, b) in closed.iter().zip(&ed) {
        assert!((a - b).abs() < 1e-10);
    }
    unsafe { qrabi_params_free(p) };
}

#[test]
fn vvp_engine_with_fixed_offset() {
    let p = qrabi_params_new(0.8, 0.3, 1.0, 0.0);
    let mut lv = [0.0; 4];
    let status = unsafe { qrabi_levels(p, 2, lv.len(), 0, lv.as_mut_ptr()) };
    assert_eq!(status, QrabiStatus::Ok);
    // exact at g = 0 with offset 0: ωm ± √(ε²+Δ²)/2
    let y = f64::hypot(0.8, 0.3);
    assert!((lv[0] - (-y / 2.0)).abs() < 1e-12);
    assert!((lv[1] - (y / 2.0)).abs() < 1e-12);
    unsafe { qrabi_params_free(p) };
}

#[test]
fn status_codes_for_misuse() {
    let mut buf = [0.0; 4];
    unsafe {
        assert_eq!(
            qrabi_levels(std::ptr::null(), 0, 4, 0, buf.as_mut_ptr()),
            QrabiStatus::NullPointer
        );
        let p = qrabi_params_new(1.0, 0.1, 1.0, 0.1);
        assert_eq!(
            qrabi_levels(p, 0, 4, 0, std::ptr::null_mut()),
            QrabiStatus::NullPointer
        );
        assert_eq!(
            qrabi_levels(p, 9, 4, 0, buf.as_mut_ptr()),
            QrabiStatus::InvalidArgument
        );
        // ε = Δ = 0 surfaces the degenerate-norm status through the ABI
        let degenerate = qrabi_params_new(0.0, 0.0, 1.0, 0.3);
        assert_eq!(
            qrabi_levels(degenerate, 0, 4, 0, buf.as_mut_ptr()),
            QrabiStatus::DegenerateNorm
        );
        qrabi_params_free(degenerate);
        qrabi_params_free(p);
    }
}

#[test]
fn sigma_z_evolution_starts_at_one() {
    let p = qrabi_params_new(1.0, 0.1, 1.0, 0.1);
    let n = 5usize;
    let mut t = vec![0.0; n];
    let mut s_closed = vec![0.0; n];
    let mut s_exact = vec![0.0; n];
    let mut completeness = f64::NAN;
    unsafe {
        assert_eq!(
            qrabi_sigma_z_evolution(p, 0, 10.0, n, 14, t.as_mut_ptr(), s_closed.as_mut_ptr(), &mut completeness),
            QrabiStatus::Ok
        );
        assert_eq!(
            qrabi_sigma_z_evolution(p, 1, 10.0, n, 0, t.as_mut_ptr(), s_exact.as_mut_ptr(), std::ptr::null_mut()),
            QrabiStatus::Ok
        );
        qrabi_params_free(p);
    }
    assert!(completeness > 1.0 - 1e-6);
    assert!((s_closed[0] - 1.0).abs() < 1e-6);
    assert!((s_exact[0] - 1.0).abs() < 1e-12);
    // weak coupling: propagators track each other on a short window
    for (a, b) in s_closed.iter().zip(&s_exact) {
        assert!((a - b).abs() < 0.05);
    }
}

#[test]
fn status_messages_are_c_strings() {
    for st in [
        QrabiStatus::Ok,
        QrabiStatus::DegenerateNorm,
        QrabiStatus::InvalidArgument,
    ] {
        let ptr = qrabi_status_message(st);
        assert!(!ptr.is_null());
        let text = unsafe { std::ffi::CStr::from_ptr(ptr) }.to_str().unwrap();
        assert!(!text.is_empty());
    }
}
