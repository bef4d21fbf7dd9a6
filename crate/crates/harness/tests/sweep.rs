use wavesec::trial::run_trial;
use wavesec::{
    aggregate, estimate_ber, read_csv, run_sweep, run_trials, write_csv, DesignMode, EveAverage, Metric, ResultTable,
    SweepSpec, SweepVariable,
};
use wavesec_core::channel::InterfererModel;
use wavesec_core::{from_db, to_db};

fn spec(mode: DesignMode, trials: usize) -> SweepSpec {
    let mut s = SweepSpec {
        mode,
        values: vec![0.0, 5.0, 10.0],
        receivers: if mode.is_single_receiver() { 1 } else { 3 },
        randomization_samples: 200,
        ..SweepSpec::default()
    };
    s.scenario.trials = trials;
    s.scenario.seed = 42;
    s
}

fn csv(t: &ResultTable) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(t, &mut buf).unwrap();
    buf
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn every_mode_runs() {
    for mode in DesignMode::ALL {
        let table = run_sweep(&spec(mode, 4)).unwrap();
        assert_eq!(table.rows.len(), 3, "{mode}");
        assert!(table.rows.iter().all(|r| r.n_trials == 4));
    }
}

#[test]
fn same_seed_same_bytes() {
    for mode in [DesignMode::AnUnknownCsi, DesignMode::MulticastSdr] {
        let a = csv(&run_sweep(&spec(mode, 20)).unwrap());
        let b = csv(&run_sweep(&spec(mode, 20)).unwrap());
        assert_eq!(a, b);
        let mut other = spec(mode, 20);
        other.scenario.seed = 43;
        assert_ne!(a, csv(&run_sweep(&other).unwrap()));
    }
}

#[test]
fn single_trial_table_is_the_trial() {
    let mut s = spec(DesignMode::AnUnknownCsi, 1);
    s.values = vec![4.0];
    let rec = run_trial(&s, &s.point(0), 0).unwrap().0;
    let d = rec.design.unwrap();
    let row = &run_sweep(&s).unwrap().rows[0];
    assert_eq!(row.mean_sinr_eve_db, Some(to_db(d.sinr_eve)));
    assert_eq!(row.mean_sinr_bob_db, Some(to_db(d.sinr_bob[0])));
    assert_eq!(row.an_fraction, Some(d.an_energy / 100.0));
    assert_eq!((row.solvability, row.n_trials, row.n_solvable), (1.0, 1, 1));
    assert_eq!(row.ci_sinr_eve_db, None);
}

#[test]
fn bob_target_met_in_every_trial() {
    for mode in DesignMode::ALL {
        let s = spec(mode, 30);
        for (i, recs) in run_trials(&s).unwrap().iter().enumerate() {
            let gamma = s.point(i).gamma;
            for d in recs.iter().filter_map(|r| r.design.as_ref()) {
                if mode.is_single_receiver() {
                    assert!(rel(d.sinr_bob[0], gamma) <= 1e-9, "{mode}");
                } else if mode == DesignMode::SumSinr {
                    assert!(rel(d.sinr_bob.iter().sum(), gamma) <= 1e-9);
                } else {
                    assert!(d.sinr_bob.iter().all(|b| *b >= gamma - 1e-6), "{mode}: {:?}", d.sinr_bob);
                }
                assert!(d.sinr_eve.is_finite() && d.sinr_eve >= 0.0);
            }
        }
    }
}

#[test]
fn an_never_hurts_bob() {
    for mode in [DesignMode::AnUnknownCsi, DesignMode::MulticastMinEnergyAn] {
        let s = spec(mode, 30);
        for i in 0..s.values.len() {
            let p = s.point(i);
            for t in 0..30 {
                let Some(d) = run_trial(&s, &p, t).unwrap().1 else { continue };
                let rw = d.an.as_ref().unwrap().matrix();
                for b in &d.bobs {
                    let with = b.sinr_with_an(rw, &d.design.waveform, d.design.energy).unwrap();
                    assert!(rel(with, b.q.sinr(&d.design.waveform, d.design.energy)) <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn solvability_is_the_eigenvalue_test() {
    for mode in [DesignMode::EigenKnownCsi, DesignMode::AnUnknownCsi, DesignMode::MinEnergyNoAn] {
        let mut s = spec(mode, 300);
        s.e_max = 20.0;
        s.variable = SweepVariable::EMax;
        s.values = vec![2.0, 5.0, 20.0];
        s.gamma_db = 6.0;
        let records = run_trials(&s).unwrap();
        let mut unsolvable = 0;
        for recs in &records {
            for r in recs {
                assert_eq!(Some(r.solvable), r.threshold_met, "{mode}");
                unsolvable += !r.solvable as usize;
            }
        }
        assert!(unsolvable > 0, "{mode}: fixture never exercises the no-transmit path");
        let table = wavesec::tabulate(&s, &records);
        for (row, recs) in table.rows.iter().zip(&records) {
            let met = recs.iter().filter(|r| r.threshold_met == Some(true)).count();
            assert_eq!(row.solvability, met as f64 / recs.len() as f64);
        }
    }
}

#[test]
fn error_bars_shrink_with_trials() {
    let radii = |trials| {
        let mut s = spec(DesignMode::AnUnknownCsi, trials);
        s.values = vec![6.0];
        let row = run_sweep(&s).unwrap().rows.remove(0);
        (row.ci_sinr_eve_db.unwrap(), row.ci_an_fraction.unwrap())
    };
    let (a1, b1) = radii(2000);
    let (a2, b2) = radii(4000);
    for ratio in [a2 / a1, b2 / b1] {
        assert!((ratio * 2f64.sqrt() - 1.0).abs() <= 0.2, "{ratio}");
    }
}

#[test]
fn eve_average_modes_differ_as_expected() {
    let mut s = spec(DesignMode::EigenKnownCsi, 200);
    s.eve_average = EveAverage::Linear;
    let linear = run_sweep(&s).unwrap();
    s.eve_average = EveAverage::Db;
    let db = run_sweep(&s).unwrap();
    for (l, d) in linear.rows.iter().zip(&db.rows) {
        // Jensen: mean of dB never exceeds dB of the mean.
        assert!(d.mean_sinr_eve_db.unwrap() <= l.mean_sinr_eve_db.unwrap());
    }
}

#[test]
fn csv_round_trip() {
    let table = run_sweep(&spec(DesignMode::EigenKnownCsi, 10)).unwrap();
    let text = csv(&table);
    let back = read_csv(&text[..], SweepVariable::GammaDb).unwrap();
    assert_eq!(csv(&back), text);
    for (a, b) in table.rows.iter().zip(&back.rows) {
        assert_eq!(format!("{:.8e}", a.mean_sinr_eve_db.unwrap()), format!("{:.8e}", b.mean_sinr_eve_db.unwrap()));
        assert!(rel(b.mean_sinr_eve_db.unwrap(), a.mean_sinr_eve_db.unwrap()) <= 5e-9);
        assert_eq!(a.n_trials, b.n_trials);
    }
}

#[test]
fn empty_table_is_rejected() {
    let t = ResultTable {
        variable: SweepVariable::GammaDb,
        rows: vec![],
    };
    assert_eq!(write_csv(&t, Vec::new()).unwrap_err().kind(), "config");
}

#[test]
fn single_row_is_two_lines() {
    let row = aggregate(1.0, &[], 100.0, EveAverage::Linear);
    let t = ResultTable {
        variable: SweepVariable::GammaDb,
        rows: vec![row],
    };
    let text = String::from_utf8(csv(&t)).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(text.lines().next().unwrap(), wavesec::CSV_HEADER.join(","));
}

fn noise_only(gamma_db: Vec<f64>, trials: usize) -> SweepSpec {
    let mut s = SweepSpec {
        values: gamma_db,
        metrics: vec![Metric::Sinr, Metric::Ber],
        ..SweepSpec::default()
    };
    s.scenario.interferers = InterfererModel::none();
    s.scenario.isi_enabled = false;
    s.scenario.trials = trials;
    s.scenario.seed = 7;
    s
}

#[test]
fn noise_only_ber_matches_gaussian_oracle() {
    let s = noise_only(vec![3.0], 40);
    let row = estimate_ber(&s, 20_000).unwrap().rows.remove(0);
    let gamma = from_db(3.0);
    let oracle = 0.5 * libm::erfc(gamma.sqrt());
    let n = 40.0 * 20_000.0;
    let se = (oracle * (1.0 - oracle) / n).sqrt();
    let ber = row.ber_bob.unwrap();
    assert!((ber - oracle).abs() <= 3.0 * se, "{ber} vs {oracle} ± {se}");
}

#[test]
fn bob_ber_falls_with_target() {
    let mut s = noise_only(vec![0.0, 2.0, 4.0, 6.0, 8.0], 20);
    s.e_max = 1e6;
    let rows = estimate_ber(&s, 5000).unwrap().rows;
    let ber: Vec<f64> = rows.iter().map(|r| r.ber_bob.unwrap()).collect();
    assert!(ber.windows(2).all(|w| w[1] < w[0]), "{ber:?}");
}

#[test]
fn ber_needs_enough_bits() {
    assert_eq!(estimate_ber(&noise_only(vec![0.0], 2), 999).unwrap_err().kind(), "config");
}
