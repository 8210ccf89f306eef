//! Word weighting, topic modelling, and topic correlation between files.

mod correlation;
mod lda;
mod tfidf;

pub use correlation::{topic_correlation, TopicSpace};
pub use lda::{all_embeddings, topic_embedding, train_lda, weighted_documents, LdaConfig, LdaModel, WeightedDocs};
pub use tfidf::{tf_idf, weigh_words, SourceKindWeights};
