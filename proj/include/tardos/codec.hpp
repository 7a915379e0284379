#pragma once
// Code generation and accusation. Biases are drawn per segment from a
// symmetric Dirichlet(kappa) over the alphabet; user symbols are categorical
// draws from the segment bias. Accusation scores one user against the pirated
// sequence with the centered scoring pair
//   g1(p) = sqrt((1-p)/p)   on a symbol match,
//   g0(p) = -sqrt(p/(1-p))  on a mismatch,
// which has mean 0 and variance 1 for an innocent user per segment.

#include <cstdint>
#include <string>
#include <vector>

#include "tardos/model.hpp"
#include "tardos/rng.hpp"

namespace tardos {

struct BiasMatrix {
    int m = 0; // segments
    int q = 0; // alphabet size
    std::vector<double> p; // m x q, index [i*q + y]

    double at(int i, int y) const { return p[static_cast<std::size_t>(i) * q + y]; }
};

struct Code {
    int n = 0; // users
    int m = 0; // segments
    std::vector<std::uint16_t> x; // n x m, index [j*m + i]

    int at(int j, int i) const { return x[static_cast<std::size_t>(j) * m + i]; }
};

// Everything needed to reproduce and audit one generated code.
struct CodeBundle {
    CodeParams params;
    std::uint64_t seed = 0;
    BiasMatrix biases;
    Code code;
};

struct AccusationResult {
    std::vector<double> scores;  // S_j per user
    std::vector<int> accused;    // users with S_j > Z
};

double g1(double p);
double g0(double p);

// Score contribution of one segment for a user holding symbol x when the
// pirate output is y with bias p_y = P(symbol y) in that segment.
double score_segment(int x, int y, double p_y);

BiasMatrix sample_bias(const CodeParams& params, int m, Rng& rng);
Code generate_code(const BiasMatrix& biases, int n, Rng& rng);

// Scores all users against pirate output y (length m) and applies threshold Z.
AccusationResult accuse(const Code& code, const std::vector<int>& y, const BiasMatrix& biases,
                        double Z);

// Columnar binary container (magic "TRDC", version 1): JSON header carrying
// {q,c,kappa,m,n,seed}, then the bias matrix as float64, then the code as
// uint16. Layout details in docs/formats.md.
void write_bundle(const std::string& path, const CodeBundle& bundle);
CodeBundle read_bundle(const std::string& path);

} // namespace tardos
