#pragma once

#include <string>
#include <vector>

#include "rotrack/geometry.hpp"
#include "rotrack/tracker.hpp"

namespace rotrack {

struct Sequence {
    std::string name;
    std::vector<std::string> frame_paths;      // sorted by numeric filename
    std::vector<RotatedBBox> ground_truth;     // one entry per frame
    bool rotated_gt = false;                   // loaded from the polygon file
};

// Loads an OTB-style directory: img/ frames plus groundtruth_rect.txt
// ("x,y,w,h", 1-based top-left) and optionally groundtruth_poly.txt
// (8 numbers per line, corner polygon -> minimal-area rotated box).
Sequence load_sequence(const std::string& dir);

struct EvalResult {
    std::vector<RotatedBBox> boxes;
    std::vector<double> ious;
    std::vector<double> center_errors;
    std::vector<double> success;    // 101 IoU thresholds, 0..1
    std::vector<double> precision;  // 51 pixel thresholds, 0..50
    double auc = 0.0;
    double precision_at_20 = 0.0;
    double seconds = 0.0;  // wall time, reported on the console only
    int frames = 0;
};

// Success counts IoU strictly above the threshold; precision counts
// center error at or below it. AUC is the mean of the success grid.
std::vector<double> success_curve(const std::vector<double>& ious);
std::vector<double> precision_curve(const std::vector<double>& errors);
double precision_at(const std::vector<double>& errors, double threshold_px);
double auc_of(const std::vector<double>& success);

// One-pass evaluation: init on the first frame's ground truth, track the
// rest. Rotated IoU against rotated ground truth; when the ground truth
// is axis aligned the prediction is scored via its axis-aligned hull.
EvalResult run_ope(const Sequence& seq, const TrackerConfig& config);

// Temporal robustness: OPE restarted from `segments` evenly spaced start
// frames, per-frame scores pooled before the curves are computed.
EvalResult run_tre(const Sequence& seq, const TrackerConfig& config, int segments);

struct NamedResult {
    std::string name;
    double auc = 0.0;
    double precision_at_20 = 0.0;
};

struct CompareEntry {
    std::string name;
    double auc_baseline = 0.0;
    double auc_variant = 0.0;
    double precision_baseline = 0.0;
    double precision_variant = 0.0;
};

struct CompareReport {
    std::vector<CompareEntry> entries;
    double mean_auc_delta = 0.0;
    double mean_precision_delta = 0.0;
    int auc_positive = 0, auc_negative = 0, auc_zero = 0;
    int precision_positive = 0, precision_negative = 0, precision_zero = 0;
};

// Pairs baseline and variant results by sequence name; the sets must
// match exactly.
CompareReport compare_results(const std::vector<NamedResult>& baseline,
                              const std::vector<NamedResult>& variant);

std::string compare_to_json(const CompareReport& report);
std::string compare_table(const CompareReport& report);

// Deterministic serializations used by the CLI.
std::string eval_to_json(const EvalResult& result, const TrackerConfig& config,
                         const std::string& sequence_name);
std::string eval_to_csv(const EvalResult& result);

}  // namespace rotrack
