//! Non-sequential baseline classifiers: multinomial Naive Bayes over
//! TF-IDF vectors and a random forest over count vectors. Both map a single
//! token's sparse vector to a language label.

mod nb;
mod rf;

pub use nb::{predict_nb, train_nb, train_nb_with_vocab, NbModel};
pub use rf::{
    feature_importance_mdi, predict_rf, train_rf, DecisionTree, MaxFeatures, RfModel, TreeNode,
};
