//! Full orthogonality validation of every built-in family over its test
//! sweep of prime powers.

use tables::lookup;

fn check(family: &str, qs: &[u64]) {
    for &q in qs {
        let t = lookup(family, q).unwrap_or_else(|e| panic!("{family} at {q}: {e}"));
        let ct = t.instantiate(q).unwrap_or_else(|e| panic!("{family} at {q}: {e}"));
        let report = ct.validate();
        assert!(
            report.all_pass(),
            "{family} at q = {q}: {:?}",
            report.failures
        );
    }
}

#[test]
fn gl2_sweep() {
    check("gl2", &[3, 4, 5, 7]);
}

#[test]
fn sl2_sweep() {
    check("sl2", &[4, 5, 7, 8, 9, 11, 13]);
}

#[test]
fn gl3_sweep() {
    check("gl3", &[3, 4, 5, 8]);
}

#[test]
fn sl3_sweep() {
    check("sl3", &[3, 5, 8, 9]);
}

#[test]
fn u3_sweep() {
    check("u3", &[2, 3, 4, 5]);
}

#[test]
fn su3_sweep() {
    check("su3", &[3, 4, 7, 9]);
}

#[test]
fn b2_sweep() {
    check("2b2", &[8, 32]);
}
