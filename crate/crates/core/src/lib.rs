//! Patient-education video triage.
//!
//! The crate is organized as a pipeline of file-based stages:
//!
//! * [`corpus`] ingests video metadata, transcripts, OCR documents and
//!   annotator labels from JSON Lines files.
//! * [`textfeat`] turns free text into counts and a readability grade.
//! * [`medterm`] holds the semantic-type filtered term dictionary and projects
//!   it onto sentences as BIO labels.
//! * [`seqtag`] trains and evaluates two medical term taggers, a bidirectional
//!   LSTM and a linear-chain CRF baseline.
//! * [`classify`] assembles per-video feature vectors and fits the three
//!   logistic-regression classifiers with Wald inference.
//! * [`cli`] wires the stages into the `vidtriage` command.

pub mod classify;
pub mod cli;
pub mod corpus;
pub mod data;
mod error;
pub mod medterm;
pub mod seqtag;
pub mod split;
pub mod synth;
pub mod textfeat;
pub mod tsv;

pub use error::{Error, Result};
