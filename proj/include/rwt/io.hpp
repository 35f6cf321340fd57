#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rwt/model.hpp"
#include "rwt/schedule.hpp"

namespace rwt {

// Dataset text format: header "d=<int> n=<int>", then one sample per line as
// a 0/1 string of length d with x^(1) first. UTF-8, newline-terminated.
void write_dataset(std::ostream& os, const Dataset& data);
void write_dataset_file(const std::string& path, const Dataset& data);
Dataset read_dataset(std::istream& is);
Dataset read_dataset_file(const std::string& path);

// Coefficient CSV: header "index,coefficient"; the index is a 0/1 string of
// length d, s^(1) first; coefficients carry 17 significant digits so a
// read-back is bit-exact. Rows are in lexicographic index order.
void write_coefficients(std::ostream& os, const SparseDensity& density);
void write_coefficients_file(const std::string& path, const SparseDensity& density);
SparseDensity read_coefficients(std::istream& is, int dim);
SparseDensity read_coefficients_file(const std::string& path, int dim);

// Mixture definition: "d=<int> c=<int>", a line of c weights, then c lines of
// d Bernoulli success probabilities.
void write_mixture(std::ostream& os, const BernoulliMixture& mix);
void write_mixture_file(const std::string& path, const BernoulliMixture& mix);
BernoulliMixture read_mixture(std::istream& is);
BernoulliMixture read_mixture_file(const std::string& path);

// Traversal stats as a small JSON object.
std::string stats_to_json(const TraversalStats& stats);

} // namespace rwt
