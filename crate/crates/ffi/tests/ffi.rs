use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use mkdv_core::evolution::{simulate, ModelConfig};
use mkdv_core::modified_energy::{energy_mode, EnergyConfig};
use mkdv_core::FourierField;
use mkdv_ffi::*;
use num_complex::Complex64;

fn last_error() -> String {
    unsafe { CStr::from_ptr(mkdv_last_error()) }.to_string_lossy().into_owned()
}

fn new_field(km: usize) -> *mut MkdvField {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { mkdv_field_new(km, &mut f) }, MkdvStatus::Ok);
    f
}

#[test]
fn field_round_trip() {
    unsafe {
        let f = new_field(8);
        let mut km = 0usize;
        assert_eq!(mkdv_field_max_mode(f, &mut km), MkdvStatus::Ok);
        assert_eq!(km, 8);
        assert_eq!(mkdv_field_set(f, 3, 0.5, -0.25), MkdvStatus::Ok);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(mkdv_field_get(f, -3, &mut re, &mut im), MkdvStatus::Ok);
        assert_eq!((re, im), (0.5, 0.25));
        assert_eq!(mkdv_field_get(f, 99, &mut re, &mut im), MkdvStatus::Ok);
        assert_eq!((re, im), (0.0, 0.0));

        let mut n = 0.0;
        assert_eq!(mkdv_field_sobolev_norm(f, 0.0, &mut n), MkdvStatus::Ok);
        assert!((n - (2.0 * 0.3125f64).sqrt()).abs() < 1e-15);

        assert_eq!(mkdv_field_set(f, 9, 1.0, 0.0), MkdvStatus::InvalidInput);
        assert!(last_error().contains("outside"));
        assert_eq!(mkdv_field_set(f, 0, 1.0, 1.0), MkdvStatus::NonHermitian);
        assert_eq!(mkdv_field_set(f, 1, f64::NAN, 0.0), MkdvStatus::InvalidInput);
        assert_eq!(mkdv_field_set(f, i64::MIN, 1.0, 0.0), MkdvStatus::InvalidInput);
        mkdv_field_free(f);
        mkdv_field_free(ptr::null_mut());

        let mut g = ptr::null_mut();
        assert_eq!(mkdv_field_new(0, &mut g), MkdvStatus::InvalidInput);
        assert!(g.is_null());
    }
}

#[test]
fn null_pointers() {
    unsafe {
        assert_eq!(mkdv_field_new(4, ptr::null_mut()), MkdvStatus::NullPointer);
        assert_eq!(mkdv_field_set(ptr::null_mut(), 1, 0.0, 0.0), MkdvStatus::NullPointer);
        let mut x = 0.0;
        assert_eq!(mkdv_field_sobolev_norm(ptr::null(), 0.0, &mut x), MkdvStatus::NullPointer);
        assert!(last_error().starts_with("null pointer"));
        assert_eq!(mkdv_omega3(1, 2, 3, ptr::null_mut()), MkdvStatus::NullPointer);
        assert_eq!(mkdv_sim_step(ptr::null_mut(), 1), MkdvStatus::NullPointer);
    }
}

#[test]
fn omega3_checked() {
    let mut w = 0i64;
    unsafe {
        assert_eq!(mkdv_omega3(1, 2, 3, &mut w), MkdvStatus::Ok);
        assert_eq!(w, -3 * 3 * 4 * 5);
        assert_eq!(mkdv_omega3(1 << 40, 1 << 40, 1 << 40, &mut w), MkdvStatus::Domain);
        assert_eq!(mkdv_omega3(i64::MAX, i64::MAX, 0, &mut w), MkdvStatus::Domain);
    }
}

#[test]
fn simulation_matches_core() {
    let km = 16;
    let mut model = mkdv_model_default();
    model.max_mode = km;
    model.dt = 1e-4;
    model.t_final = 0.002;
    unsafe {
        let f = new_field(km);
        mkdv_field_set(f, 1, 0.1, 0.0);
        mkdv_field_set(f, 2, 0.02, -0.01);
        let mut sim = ptr::null_mut();
        assert_eq!(mkdv_sim_new(&model, f, &mut sim), MkdvStatus::Ok);
        assert_eq!(mkdv_sim_step(sim, 20), MkdvStatus::Ok);
        let mut t = 0.0;
        mkdv_sim_time(sim, &mut t);
        assert!((t - 0.002).abs() < 1e-15);
        let out = new_field(km);
        assert_eq!(mkdv_sim_copy_field(sim, out), MkdvStatus::Ok);

        let mut u0 = FourierField::zeros(km);
        u0.set_pair(1, Complex64::new(0.1, 0.0));
        u0.set_pair(2, Complex64::new(0.02, -0.01));
        let cfg = ModelConfig { max_mode: km, dt: 1e-4, t_final: 0.002, ..Default::default() };
        let traj = simulate(&u0, &cfg, 20).unwrap();
        let last = traj.last().unwrap().1;
        for k in -(km as i64)..=km as i64 {
            let (mut re, mut im) = (0.0, 0.0);
            mkdv_field_get(out, k, &mut re, &mut im);
            assert_eq!(Complex64::new(re, im), last.get(k));
        }

        let wrong = new_field(km + 1);
        assert_eq!(mkdv_sim_copy_field(sim, wrong), MkdvStatus::MismatchedModes);
        let mut sim2 = ptr::null_mut();
        assert_eq!(mkdv_sim_new(&model, wrong, &mut sim2), MkdvStatus::MismatchedModes);
        let mut bad = model;
        bad.dt = -1.0;
        assert_eq!(mkdv_sim_new(&bad, f, &mut sim2), MkdvStatus::Config);
        assert!(last_error().contains("dt"));

        for p in [f, out, wrong] {
            mkdv_field_free(p);
        }
        mkdv_sim_free(sim);
    }
}

#[test]
fn blow_up_keeps_last_state() {
    let mut model = mkdv_model_default();
    model.max_mode = 8;
    model.dt = 1e-2;
    model.t_final = 1.0;
    unsafe {
        let f = new_field(8);
        mkdv_field_set(f, 1, 1e6, 0.0);
        let mut sim = ptr::null_mut();
        assert_eq!(mkdv_sim_new(&model, f, &mut sim), MkdvStatus::Ok);
        assert_eq!(mkdv_sim_step(sim, 100), MkdvStatus::BlowUp);
        let out = new_field(8);
        mkdv_sim_copy_field(sim, out);
        let mut n = 0.0;
        mkdv_field_sobolev_norm(out, 0.0, &mut n);
        assert!(n.is_finite());
        mkdv_field_free(f);
        mkdv_field_free(out);
        mkdv_sim_free(sim);
    }
}

#[test]
fn energy_matches_core() {
    let km = 700;
    let mut u = FourierField::zeros(km);
    let f = new_field(km);
    for (k, c) in [(600i64, Complex64::new(0.01, 0.02)), (601, Complex64::new(-0.01, 0.0)), (1, Complex64::new(0.1, 0.1))] {
        u.set_pair(k, c);
        unsafe { mkdv_field_set(f, k, c.re, c.im) };
    }
    let cfg = mkdv_energy_config_default();
    let mut r = MkdvEnergyReport::default();
    unsafe {
        assert_eq!(mkdv_energy_mode(f, 600, &cfg, &mut r), MkdvStatus::Ok);
    }
    let expect = energy_mode(&u, 600, &EnergyConfig::default()).unwrap();
    assert_eq!((r.k, r.quadratic, r.e31, r.e32, r.e5, r.total), (600, expect.quadratic, expect.e31, expect.e32, expect.e5, expect.total));
    let mut bad = cfg;
    bad.theta1 = 2.0;
    unsafe {
        assert_eq!(mkdv_energy_mode(f, 600, &bad, &mut r), MkdvStatus::InvalidInput);
        assert_eq!(mkdv_energy_mode(f, 701, &cfg, &mut r), MkdvStatus::InvalidInput);
        mkdv_field_free(f);
    }
}

#[test]
fn header_is_current_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/mkdv.h")).unwrap();
    for name in [
        "MKDV_STATUS_OK",
        "MKDV_STATUS_INTERNAL",
        "typedef struct MkdvField MkdvField;",
        "typedef struct MkdvSimulation MkdvSimulation;",
        "mkdv_field_new",
        "mkdv_sim_step",
        "mkdv_energy_mode",
        "mkdv_last_error",
        "mkdv_omega3",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
    // compile a small C program against the header when a C compiler is present
    let Ok(out) = Command::new("cc").arg("--version").output() else { return };
    if !out.status.success() {
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"mkdv.h\"\n\
         int main(void) {\n\
           MkdvField *f = 0;\n\
           MkdvModel m = mkdv_model_default();\n\
           MkdvStatus s = mkdv_field_new(m.max_mode, &f);\n\
           mkdv_field_free(f);\n\
           return s == MKDV_STATUS_OK ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}
