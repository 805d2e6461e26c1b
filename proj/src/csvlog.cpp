#include "navguard/csvlog.hpp"

#include <cstdio>
#include <fstream>

#include "navguard/errors.hpp"

namespace navguard {

namespace {

void append_number(std::string& row, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  row += buf;
}

void append_state(std::string& row, const Vec11& v) {
  for (int i = 0; i < kStateDim; ++i) {
    row += ',';
    append_number(row, v(i));
  }
}

void append_channels(std::string& row, const Vec6& v) {
  for (int i = 0; i < kMeasDim; ++i) {
    row += ',';
    append_number(row, v(i));
  }
}

}  // namespace

const std::string& csv_header() {
  static const std::string header = [] {
    std::string h = "k,t";
    const char* truth[] = {"x", "y", "theta", "vx", "vy", "thetadot",
                           "ax", "ay", "b_thetadot", "b_ax", "b_ay"};
    for (const char* name : truth) {
      h += ",truth_";
      h += name;
    }
    const char* meas[] = {"yx", "yy", "ytheta", "ythetadot", "yax", "yay"};
    for (const char* name : meas) {
      h += ",meas_";
      h += name;
    }
    h += ",attacked";
    for (const char* name : truth) {
      h += ",est_";
      h += name;
    }
    for (const char* prefix : {"resid_", "resid_norm_", "S_", "tau_"}) {
      for (int i = 0; i < kMeasDim; ++i) {
        h += ',';
        h += prefix;
        h += std::to_string(i);
      }
    }
    h += ",hypothesis,alarm_channel,k_alpha";
    return h;
  }();
  return header;
}

void write_log_csv(const SimLog& log, std::ostream& out) {
  out << csv_header() << '\n';
  std::string row;
  for (const StepRecord& rec : log.steps) {
    row.clear();
    row += std::to_string(rec.k);
    row += ',';
    append_number(row, rec.t);
    append_state(row, rec.truth.to_vector());
    append_channels(row, rec.y);
    row += rec.attacked ? ",1" : ",0";
    append_state(row, rec.est);
    append_channels(row, rec.resid);
    append_channels(row, rec.resid_norm);
    append_channels(row, rec.S);
    append_channels(row, rec.tau);
    row += rec.hypothesis == Hypothesis::H1 ? ",H1" : ",H0";
    row += ',';
    if (rec.alarm_channel) {
      row += std::to_string(*rec.alarm_channel);
    }
    row += ',';
    if (rec.k_alpha) {
      row += std::to_string(*rec.k_alpha);
    }
    row += '\n';
    out << row;
  }
}

void write_log_csv(const SimLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open \"" + path + "\" for writing");
  }
  write_log_csv(log, out);
  out.flush();
  if (!out) {
    throw Error(ErrorCode::IoError, "failed writing \"" + path + "\"");
  }
}

}  // namespace navguard
