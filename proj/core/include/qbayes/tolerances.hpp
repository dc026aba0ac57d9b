#pragma once

namespace qbayes {

/// Central numerical tolerances. Every validation and solver threshold in
/// the library reads from one of these fields.
struct Tolerances {
    double hermiticity = 1e-12;       // entrywise |m_ij - conj(m_ji)|
    double unit_trace = 1e-10;        // density operator trace
    double psd = 1e-10;               // allowed negative eigenvalue magnitude
    double orthonormality = 1e-10;    // eigenvector inner products
    double reconstruction = 1e-9;     // spectral decomposition round trip
    double projector = 1e-9;          // idempotence / completeness
    double sylvester_residual = 1e-9; // ||XA + AX - 2B|| / max(1, ||B||)
    double kernel_eigenvalue = 1e-12; // relative to ||A||, kernel detection
    double kernel_rhs = 1e-10;        // relative to ||B||, consistency on kernel
    double prior_normalization = 1e-8;
    double fmap_roundtrip = 1e-10;
    double root_finding = 1e-12;
    double zero_probability = 1e-14;  // POM outcome weight cutoff
    double zero_probability_rhs = 1e-12;
    double probability_sum = 1e-9;
    double posterior_mass_floor = 1e-300;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tols{};
    return tols;
}

} // namespace qbayes
