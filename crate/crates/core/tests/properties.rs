use frqa::audio::{AudioSignal, TimeRestriction};
use frqa::frqa::{prepare, retrieve_by_measurement, FrqaState};
use frqa::ops::{
    add_signals, delay_signal, invert_signal, reverse_signal, reverse_signal_restricted,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn negate(v: i64, q: u32) -> i64 {
    let m = 1i64 << q;
    let r = (-v).rem_euclid(m);
    if r >= m / 2 {
        r - m
    } else {
        r
    }
}

fn delayed(x: &[i64], dt: usize) -> Vec<i64> {
    (0..x.len()).map(|t| if t < dt { 0 } else { x[t - dt] }).collect()
}

/// Position 0 is the most significant time bit.
fn restricted_reversed(x: &[i64], l: usize, fixed: &[(usize, bool)]) -> Vec<i64> {
    let mut mask = (1usize << l) - 1;
    for &(p, _) in fixed {
        mask &= !(1 << (l - 1 - p));
    }
    (0..x.len())
        .map(|t| {
            let hit = fixed.iter().all(|&(p, v)| ((t >> (l - 1 - p)) & 1 == 1) == v);
            if hit {
                x[t ^ mask]
            } else {
                x[t]
            }
        })
        .collect()
}

fn all_signals(q: u32, len: usize) -> Vec<AudioSignal> {
    let base = 1u64 << q;
    let half = 1i64 << (q - 1);
    (0..base.pow(len as u32))
        .map(|mut code| {
            let s = (0..len)
                .map(|_| {
                    let d = (code % base) as i64;
                    code /= base;
                    d - half
                })
                .collect();
            AudioSignal::new(s, q).unwrap()
        })
        .collect()
}

fn check_unary(x: &AudioSignal, s: &FrqaState, l: usize) {
    let q = x.q();
    let v = x.samples();
    let inv = invert_signal(s).unwrap().retrieve().unwrap();
    assert_eq!(inv.samples(), v.iter().map(|&a| negate(a, q)).collect::<Vec<_>>());
    let mut rev = v.to_vec();
    rev.reverse();
    assert_eq!(reverse_signal(s).unwrap().retrieve().unwrap().samples(), rev);
    for dt in 0..1usize << l {
        let d = delay_signal(s, dt as u64).unwrap().retrieve().unwrap();
        assert_eq!(d.samples(), delayed(v, dt), "{v:?} dt={dt}");
    }
    for p in 0..l {
        for bit in [false, true] {
            if l == 1 {
                continue;
            }
            let r = TimeRestriction::new().fix(p, bit);
            let got = reverse_signal_restricted(s, &r).unwrap().retrieve().unwrap();
            assert_eq!(got.samples(), restricted_reversed(v, l, &[(p, bit)]), "{v:?} {r}");
        }
    }
}

#[test]
fn every_operation_matches_its_oracle_exhaustively() {
    let signals = all_signals(2, 4);
    let states: Vec<FrqaState> = signals.iter().map(|x| prepare(x).unwrap()).collect();
    for (x, s) in signals.iter().zip(&states) {
        check_unary(x, s, 2);
    }
    for (i, (x, sx)) in signals.iter().zip(&states).enumerate() {
        // a stride keeps the pair count modest while touching every signal
        for (y, sy) in signals.iter().zip(&states).skip(i % 7).step_by(7) {
            let z = add_signals(sx, sy).unwrap();
            let expect: Vec<i64> = x.samples().iter().zip(y.samples()).map(|(a, b)| a + b).collect();
            assert_eq!(z.samples(), expect);
        }
    }
}

#[test]
fn every_operation_matches_its_oracle_on_random_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let x: Vec<i64> = (0..8).map(|_| rng.gen_range(-4..4)).collect();
        let x = AudioSignal::new(x, 3).unwrap();
        let s = prepare(&x).unwrap();
        check_unary(&x, &s, 3);
        let fixed: Vec<(usize, bool)> = vec![(0, rng.gen()), (2, rng.gen())];
        let r = TimeRestriction::from_pairs(fixed.clone());
        let got = reverse_signal_restricted(&s, &r).unwrap().retrieve().unwrap();
        assert_eq!(got.samples(), restricted_reversed(x.samples(), 3, &fixed));
    }
    for _ in 0..10 {
        let x: Vec<i64> = (0..4).map(|_| rng.gen_range(-4..4)).collect();
        let y: Vec<i64> = (0..4).map(|_| rng.gen_range(-4..4)).collect();
        let z = add_signals(
            &prepare(&AudioSignal::new(x.clone(), 3).unwrap()).unwrap(),
            &prepare(&AudioSignal::new(y.clone(), 3).unwrap()).unwrap(),
        )
        .unwrap();
        let expect: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        assert_eq!(z.samples(), expect);
        assert_eq!(z.q(), 4);
    }
}

#[test]
fn pipelines_compose_like_their_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    for _ in 0..30 {
        let v: Vec<i64> = (0..8).map(|_| rng.gen_range(-4..4)).collect();
        let s = prepare(&AudioSignal::new(v.clone(), 3).unwrap()).unwrap();
        let s = delay_signal(&s, 3).unwrap();
        let s = reverse_signal(&s).unwrap();
        let s = invert_signal(&s).unwrap();
        let mut expect = delayed(&v, 3);
        expect.reverse();
        let expect: Vec<i64> = expect.iter().map(|&a| negate(a, 3)).collect();
        assert_eq!(s.retrieve().unwrap().samples(), expect);
    }
}

/// Pearson statistic of the time-register outcomes against the uniform law.
fn chi_square(counts: &[u64], shots: u64) -> f64 {
    let e = shots as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}

#[test]
fn measurement_is_uniform_over_time_and_exact_in_amplitude() {
    // 0.1% upper critical values for 1, 3 and 7 degrees of freedom
    let critical = [10.828, 16.266, 24.322];
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for l in 1..=3u32 {
        let v: Vec<i64> = (0..1 << l).map(|_| rng.gen_range(-4..4)).collect();
        let s = prepare(&AudioSignal::new(v.clone(), 3).unwrap()).unwrap();
        let time = s.time_wires();
        let amp = s.amplitude_wires();
        let shots = 4096u64;
        let mut counts = vec![0u64; 1 << l];
        for seed in 0..shots {
            let (t_bits, collapsed) = s.state().measure_wires(&time, seed).unwrap();
            let t = t_bits.to_u64() as usize;
            counts[t] += 1;
            let (a_bits, _) = collapsed.measure_wires(&amp, seed ^ 0xabcdef).unwrap();
            let a = frqa::audio::decode_twos_complement(&a_bits).unwrap();
            assert_eq!(a, v[t]);
        }
        let stat = chi_square(&counts, shots);
        assert!(stat < critical[l as usize - 1], "l={l} counts {counts:?} chi2 {stat}");
    }
}

#[test]
fn shot_retrieval_sees_every_sample() {
    let v = vec![1, -3, 2, 0, -4, 3, -1, 1];
    let s = prepare(&AudioSignal::new(v.clone(), 3).unwrap()).unwrap();
    let got = retrieve_by_measurement(&s, 500, 9).unwrap();
    let got: Vec<i64> = got.into_iter().map(|o| o.expect("sample observed")).collect();
    assert_eq!(got, v);
    assert_eq!(
        retrieve_by_measurement(&s, 500, 9).unwrap(),
        retrieve_by_measurement(&s, 500, 9).unwrap()
    );
}

#[test]
fn state_json_round_trips() {
    let x = AudioSignal::new(vec![3, -1, 0, 2, -4], 3).unwrap();
    let s = delay_signal(&prepare(&x).unwrap(), 1).unwrap();
    let back = FrqaState::from_json(&s.to_json()).unwrap();
    assert_eq!(back.retrieve().unwrap(), s.retrieve().unwrap());
    assert_eq!(back.to_json(), s.to_json());
}
