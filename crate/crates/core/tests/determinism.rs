use cesaro::heat::heat_trace_with;
use cesaro::spectra::Spectrum;
use cesaro::summability::{integer_comb, riesz_sum_with, CesaroOrder};
use cesaro::testfn::TestFunction;
use cesaro::zeta::{lattice_sampling_with, zeta_cesaro_estimate_with, LatticeFunction};
use cesaro::Exec;

#[test]
fn parallel_results_are_bitwise_sequential() {
    let comb = integer_comb(|n| (n as f64).powf(1.5));
    for x in [10.5, 12_345.6, 3.0e5] {
        let a = riesz_sum_with(Exec::Sequential, &comb, CesaroOrder(2), x).unwrap();
        let b = riesz_sum_with(Exec::Parallel, &comb, CesaroOrder(2), x).unwrap();
        assert_eq!(a.to_bits(), b.to_bits(), "riesz at {x}");
    }
    for alpha in [0.0, 1.0, 2.5] {
        let a = zeta_cesaro_estimate_with(Exec::Sequential, alpha, CesaroOrder(3), 5e4).unwrap();
        let b = zeta_cesaro_estimate_with(Exec::Parallel, alpha, CesaroOrder(3), 5e4).unwrap();
        assert_eq!(a.to_bits(), b.to_bits(), "zeta at {alpha}");
    }
    let torus = Spectrum::torus(3, 20_000).unwrap();
    for t in [0.01, 0.3] {
        let a = heat_trace_with(Exec::Sequential, &torus, t, 1e-12).unwrap();
        let b = heat_trace_with(Exec::Parallel, &torus, t, 1e-12).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits(), "heat at {t}");
    }
    let g = LatticeFunction::Radial(TestFunction::exp_decay());
    let a = lattice_sampling_with(Exec::Sequential, &g, 0.02, 3).unwrap();
    let b = lattice_sampling_with(Exec::Parallel, &g, 0.02, 3).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}
