use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use udw_coherence::quantum::{
    apply_channel, choi_eigenvalues, dephase, is_incoherent, l1_coherence, remaining_coherence,
    ChannelKernel, MaxCoherentQubit, QubitState,
};

fn state() -> impl Strategy<Value = QubitState> {
    // Bloch ball, radius drawn so mixed and pure states both appear
    (0.0..=1.0f64, -1.0..=1.0f64, 0.0..2.0 * PI).prop_map(|(r, cos_t, az)| {
        let sin_t = (1.0 - cos_t * cos_t).sqrt();
        QubitState::from_bloch(r * sin_t * az.cos(), r * sin_t * az.sin(), r * cos_t).unwrap()
    })
}

fn kernel() -> impl Strategy<Value = ChannelKernel> {
    (0.0..=1.0f64, 0.0..2.0 * PI, -PI..PI).prop_map(|(r, arg, phase)| {
        ChannelKernel::new(Complex64::from_polar(r, arg), phase).unwrap()
    })
}

proptest! {
    #[test]
    fn channel_output_is_a_state(k in kernel(), rho in state()) {
        let out = apply_channel(&k, &rho);
        let m = out.matrix();
        prop_assert!((m.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!((m - m.adjoint()).iter().all(|d| d.norm() < 1e-12));
        // validated constructor re-checks positivity
        prop_assert!(QubitState::new(*m).is_ok());
    }

    #[test]
    fn choi_is_positive(k in kernel()) {
        prop_assert!(choi_eigenvalues(&k)[0] > -1e-12);
    }

    #[test]
    fn l1_coherence_is_convex(a in state(), b in state(), p in 0.0..=1.0f64) {
        let mixed = l1_coherence(&a.mix(&b, p));
        prop_assert!(mixed <= p * l1_coherence(&a) + (1.0 - p) * l1_coherence(&b) + 1e-12);
    }

    #[test]
    fn dephased_states_are_incoherent(rho in state()) {
        let d = dephase(&rho);
        prop_assert!(is_incoherent(&d));
        prop_assert_eq!(l1_coherence(&d), 0.0);
        prop_assert!((d.rho_gg() - rho.rho_gg()).abs() < 1e-15);
    }

    #[test]
    fn remaining_coherence_matches_channel(k in kernel(), theta in 0.0..2.0 * PI) {
        let direct = l1_coherence(&apply_channel(&k, &MaxCoherentQubit::new(theta).state()));
        prop_assert!((remaining_coherence(&k, theta) - direct).abs() < 1e-12);
        prop_assert!(remaining_coherence(&k, theta) >= k.z().re.abs() - 1e-12);
    }

    #[test]
    fn incoherent_inputs_gain_at_most_im_z(k in kernel(), p in 0.0..=1.0f64) {
        let rho = QubitState::ground().mix(&QubitState::excited(), p);
        prop_assert!(l1_coherence(&apply_channel(&k, &rho)) <= k.z().im.abs() + 1e-12);
    }
}
