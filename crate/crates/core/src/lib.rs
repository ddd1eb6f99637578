//! Classical machine-learning pipeline for classifying COVID-19 social media
//! posts as `real` or `fake`.
//!
//! The crate is organised the way the pipeline runs:
//!
//! - [`corpus`]: loading and summarising labelled dataset splits
//! - [`textprep`]: normalisation, tokenisation, stopwords, stemming and lemmatisation
//! - [`features`]: TF-IDF n-grams, readability indices, lexicon categories and
//!   punctuation rates, combined into one sparse vector per post
//! - [`models`]: linear SVM / logistic regression (Pegasos SGD), multinomial
//!   naive Bayes, a one-hidden-layer MLP and a random forest
//! - [`evaluation`]: confusion matrix, accuracy and weighted precision/recall/F1
//! - [`search`]: grid enumeration, parallel grid runs and model persistence

pub mod corpus;
pub mod evaluation;
pub mod features;
pub mod models;
pub mod resources;
pub mod search;
pub mod textprep;

pub use corpus::{Label, LabeledPost, DatasetSplit, SplitName};
pub use resources::Resources;
