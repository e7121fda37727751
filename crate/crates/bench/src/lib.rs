//! Shared inputs for the benchmarks.

/// (γ, β′) pairs of increasing size used by the pipeline benchmarks.
pub const WORKLOADS: &[(&str, &str, &str)] = &[
    ("linear", "t", "1"),
    ("sextic", "-(t^6)", "t^2-1"),
    ("cyclotomic", "(t^12-1)/(t^5+t+1)", "t^3-2"),
    ("dense", "(t^10+3*t^7-5*t^3+t-11)/(t^9-t^8+2*t^5+7)", "(t^4+t+1)/(t^2-5)"),
];
