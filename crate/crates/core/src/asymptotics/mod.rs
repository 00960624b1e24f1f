//! Asymptotic analysis of the maximal tree-child counts: rational tables of
//! the normalized counts, Airy-based certificates for the lower and upper
//! bound recurrences, and main-term evaluation.

pub mod airy;
pub mod certificates;
pub mod interval;
pub mod main_terms;
pub mod tables;

pub use airy::{airy_ai, airy_ai_prime, airy_root_a1, AiryContext, MIN_DIGITS};
pub use certificates::{scan, CellReport, CertificateParams, Certifier, ScanReport, Side, Verdict};
pub use interval::Interval;
pub use main_terms::{a1_f64, main_term_log_an, main_term_log_tc, theta_ratio, theta_report, ThetaReport};
pub use tables::{
    below_power, check_appendix_lemma, check_d_vs_dhat, d_hat_table, d_table, p_table, range_len,
    AppendixReport, DhatReport, PathTable, RationalTable,
};
