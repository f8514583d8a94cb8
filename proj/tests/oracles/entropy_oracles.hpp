#pragma once

// Brute-force reference implementations of the fuzzy entropies. Every sum is
// written out as the textbook nested loop over ordered template pairs; no code
// is shared with the library except the EMD used to rebuild the IFuEn input.

#include <vector>

namespace oracle {

using Series = std::vector<double>;

struct Settings {
  int m = 2;
  double n = 2.0;
  double r_frac = 0.15;
  int tau = 2;
  double alpha = 0.5;
  int pm = 3;
  int delay = 1;
  int k_depth = 2;
  int k_seg = 8;
  int m_bins = 512;
  int shift = 1;
  double n_local = 3.0;
  double r_local = 0.15;
  double n_global = 2.0;
  double r_global = 0.15;
};

double sd(const Series& x);
double digamma(double z);

double fu_en(const Series& x, const Settings& s);
// op: 0 translation, 1 reflection, 2 inversion, 3 glide reflection
double afu_en_operator(const Series& x, const Settings& s, int op);
double afu_en(const Series& x, const Settings& s);
double mfu_en(const Series& x, const Settings& s);
double rcm_fu_en(const Series& x, const Settings& s);
double ffu_en(const Series& x, const Settings& s);
double fu_ap_en(const Series& x, const Settings& s);
double mvm_fu_en(const Series& x, const Settings& s);
double ifu_en(const Series& x, const Settings& s);
double fu_dist_en(const Series& x, const Settings& s);
double c_fu_en(const Series& x, const Series& y, const Settings& s);
double fu_pe_en(const Series& x, const Settings& s);
double h_fu_en(const Series& x, const Settings& s);

struct Measure {
  double total, local, global;
};
Measure fu_me_en(const Series& x, const Settings& s);

}  // namespace oracle
