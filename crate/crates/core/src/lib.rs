//! Hardware-native Ising instance generation, hardness-ratio analysis,
//! annealing solvers and order-statistics tools for Knapsack QUBOs.

pub mod generator;
pub mod io;
pub mod knapsack;
pub mod metrics;
pub mod model;
pub mod orderstats;
pub mod rng;
pub mod solvers;
pub mod special;
pub mod topology;
