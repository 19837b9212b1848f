#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace topokey::cli
{

/// Exit codes shared by every subcommand.
enum Exit : int
{
    kOk = 0,
    kCheckFailed = 1,
    kUsage = 2,
};

/// Reproducibility record written next to every output.
struct RunManifest
{
    std::string command;
    std::vector<std::string> inputs;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();

    std::string dump() const;
};

struct PersistenceArgs
{
    std::string input;
    std::optional<std::size_t> random_grids;
    std::uint64_t seed = 0;
    bool oracle = false;
    bool check = false;
    bool keep_zero = false;
    bool dim0 = false;
    std::string output;
};

struct LossArgs
{
    std::string map1;
    std::string map2;
    std::string homography;
    double alpha = 10.0;
    bool keep_zero = false;
    bool symmetric = false;
    bool gradients = false;
    std::string output;
};

struct GradcheckArgs
{
    std::string map1;
    std::string map2;
    std::string homography;
    std::optional<std::size_t> random_size;
    std::uint64_t seed = 0;
    std::vector<double> alphas{10.0};
    double step = 1e-5;
    std::size_t samples = 50;
    bool keep_zero = false;
    bool symmetric = false;
    bool verbose = false;
};

struct OptimizeArgs
{
    std::string map1;
    std::string map2;
    std::size_t size = 32;
    std::uint64_t seed = 0;
    double alpha = 10.0;
    std::size_t steps = 500;
    double lr = 0.01;
    bool symmetric = false;
    bool keep_zero = false;
    bool unit_box = false;
    std::string output_dir;
};

struct SynthArgs
{
    std::uint64_t seed = 0;
    std::size_t size = 64;
    std::size_t blobs = 8;
    std::string warp = "homography";
    double noise = 0.0;
    std::string output_dir;
};

struct DetectArgs
{
    std::string input;
    double gamma = 0.7;
    std::optional<std::size_t> budget;
    std::string ranking = "score";
    std::optional<double> min_persistence; // switches to persistence keypoints
    bool keep_plateaus = false;
    std::string overlay;
    std::string output;
};

struct RepeatabilityArgs
{
    std::string scene;
    std::string kp1;
    std::string kp2;
    std::string homography;
    std::vector<std::size_t> budgets{250, 500, 1000, 2000, 4000};
    std::vector<double> eps{1, 2, 3, 4, 5};
    std::string detector = "nms";
    double gamma = 0.7;
    double min_persistence = 0.0;
    std::string output;
};

struct ScaleArgs
{
    std::string input;
    std::size_t reference_side = 1000;
    std::size_t budget = 500;
    std::vector<double> eps{1, 2, 3, 4, 5};
    std::string detector = "nms";
    double gamma = 0.7;
    double min_persistence = 0.0;
    std::string output;
};

int run_persistence(const PersistenceArgs& args, const std::string& command_line);
int run_loss(const LossArgs& args, const std::string& command_line);
int run_gradcheck(const GradcheckArgs& args, const std::string& command_line);
int run_optimize(const OptimizeArgs& args, const std::string& command_line);
int run_synth(const SynthArgs& args, const std::string& command_line);
int run_detect(const DetectArgs& args, const std::string& command_line);
int run_repeatability(const RepeatabilityArgs& args, const std::string& command_line);
int run_scale(const ScaleArgs& args, const std::string& command_line);

} // namespace topokey::cli
