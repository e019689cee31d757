use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use ris_gbsm::element::PhaseModel;
use ris_gbsm::experiments::*;
use ris_gbsm::geometry::Position3;
use ris_gbsm::panel::Strategy;

#[test]
fn snr_arithmetic() {
    let b = LinkBudget::reference(0.0);
    assert_abs_diff_eq!(snr(&b, Complex64::new(1.0, 0.0)), 160.0, epsilon = 1e-12);
    let h = Complex64::new(0.3, -0.4);
    assert_abs_diff_eq!(snr(&b, h / 2.0) - snr(&b, h), -20.0 * 2f64.log10(), epsilon = 1e-12);
    assert_eq!(snr(&b, Complex64::new(0.0, 0.0)), f64::NEG_INFINITY);
    let louder = LinkBudget { tx_power_dbm: 50.0, ..b };
    assert_abs_diff_eq!(snr(&louder, h) - snr(&b, h), 7.0, epsilon = 1e-12);
}

fn small_sweep() -> ConfigSweepSetup {
    let mut s = ConfigSweepSetup::reference(false);
    s.sides = vec![1, 4, 16];
    s
}

#[test]
fn config_sweep_grid_and_order() {
    let s = small_sweep();
    let r = run_config_sweep(&s).unwrap();
    assert_eq!(r.rows.len(), 2 * 3 * 3);
    assert_eq!((r.rows[0].freq_ghz, r.rows[0].n_side, r.rows[0].strategy), (3.0, 1, Strategy::Optimal));
    assert_eq!((r.rows[17].freq_ghz, r.rows[17].n_side, r.rows[17].strategy), (6.0, 16, Strategy::Specular));
    assert!(r.to_csv().starts_with("freq_ghz,n_side,strategy,snr_db\n3,1,optimal,"));
    assert_eq!(r, run_config_sweep(&s).unwrap());
}

#[test]
fn tx_power_shifts_every_row() {
    let a = run_config_sweep(&small_sweep()).unwrap();
    let mut s = small_sweep();
    s.tx_power_dbm += 3.5;
    let b = run_config_sweep(&s).unwrap();
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_abs_diff_eq!(y.snr_db - x.snr_db, 3.5, epsilon = 1e-9);
    }
}

#[test]
fn distance_enters_only_through_path_loss() {
    // Pushing Tx and Rx twice as far along the same rays leaves every angle
    // unchanged, so |H| is unchanged and the SNR moves by the path-loss
    // difference alone.
    let base = small_sweep();
    let ris = base.site.ris();
    let far = |p: Position3| ris + (p - ris) + (p - ris);
    let mut moved = base.clone();
    moved.site.tx = far(base.site.tx);
    moved.site.rx = far(base.site.rx);
    let a = run_config_sweep(&base).unwrap();
    let b = run_config_sweep(&moved).unwrap();

    let mut cfg = base.scenario.clone();
    for (x, y) in a.rows.iter().zip(&b.rows) {
        cfg.carrier_hz = x.freq_ghz * 1e9;
        let pl = |s: &ConfigSweepSetup| {
            let l1 = ris_gbsm::gbsm::path_loss_for_link(&cfg, ris_gbsm::gbsm::LinkGeometry::between(s.site.tx, ris)).unwrap();
            let l2 = ris_gbsm::gbsm::path_loss_for_link(&cfg, ris_gbsm::gbsm::LinkGeometry::between(ris, s.site.rx)).unwrap();
            l1 + l2
        };
        assert_abs_diff_eq!(x.snr_db - y.snr_db, pl(&moved) - pl(&base), epsilon = 1e-9);
    }
}

#[test]
fn pattern_rows_cover_models_pairs_and_cut() {
    let mut s = PatternSetup::reference();
    s.cut = ris_gbsm::panel::CutSpec::Zenith { azimuth_deg: 0.0, start_deg: -60.0, stop_deg: 60.0, step_deg: 1.0 };
    let r = run_pattern_experiment(&s).unwrap();
    assert_eq!(r.rows.len(), 2 * 4 * 121);
    let best = r.rows.iter().map(|x| x.gain_db).fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(best, 0.0);
    // the overall peak belongs to the ideal model
    let top = r.rows.iter().find(|x| x.gain_db == 0.0).unwrap();
    assert_eq!(top.model, PhaseModel::IdealPhase);
    assert!(r.to_csv().starts_with("strategy,model,pol_in,pol_out,theta_out_deg,gain_db\noptimal,non-ideal,v,v,-60,"));
}

#[test]
fn pattern_vv_and_vh_differ() {
    let s = PatternSetup::reference();
    let g = s.target_gain_db(PhaseModel::NonIdeal).unwrap();
    assert!((g[0] - g[1]).abs() > 1.0, "{g:?}");
}

#[test]
fn asa_sweep_is_reproducible_and_thread_independent() {
    let mut s = AsaSweepSetup::reference(42);
    s.seeds = 6;
    s.asa_deg = vec![1.0, 10.0];
    let a = run_asa_sweep(&s).unwrap();
    assert_eq!(a.rows.len(), 2 * 2 * 6);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = single.install(|| run_asa_sweep(&s).unwrap());
    assert_eq!(a.to_csv(), b.to_csv());
    // rows are (asa, model, seed)
    assert_eq!((a.rows[0].asa_deg, a.rows[0].model, a.rows[0].seed), (1.0, PhaseModel::NonIdeal, 0));
    assert_eq!((a.rows[7].asa_deg, a.rows[7].model, a.rows[7].seed), (1.0, PhaseModel::IdealPhase, 1));
    assert!(mean_snr(&a.rows, 1.0, PhaseModel::NonIdeal).is_some());
    assert!(mean_snr(&a.rows, 5.0, PhaseModel::NonIdeal).is_none());

    let mut other = s.clone();
    other.tx_ris.seed = 43;
    assert_ne!(a.to_csv(), run_asa_sweep(&other).unwrap().to_csv());
}

#[test]
fn asa_sweep_accepts_stochastic_ris_rx() {
    let mut s = AsaSweepSetup::reference(1);
    s.seeds = 3;
    s.asa_deg = vec![5.0];
    s.ris_rx = Some(ris_gbsm::gbsm::ScenarioConfig::new(s.tx_ris.carrier_hz, ris_gbsm::gbsm::LinkState::Nlos));
    let r = run_asa_sweep(&s).unwrap();
    assert_eq!(r.rows.len(), 6);
    assert!(r.rows.iter().all(|x| x.snr_db.is_finite()));
}
