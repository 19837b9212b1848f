#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "topokey/height_map.hpp"

namespace
{

std::string join_args(int argc, char** argv)
{
    std::string out;
    for (int k = 0; k < argc; ++k)
    {
        if (k > 0)
            out += ' ';
        out += argv[k];
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace topokey::cli;

    CLI::App app{"topokey: topological keypoints from height maps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", TOPOKEY_VERSION);

    PersistenceArgs pers;
    auto* persistence = app.add_subcommand("persistence", "Persistence pairs of a height map");
    persistence->add_option("input", pers.input, "Matrix text or PGM file")->check(CLI::ExistingFile);
    persistence->add_option("--random", pers.random_grids, "Check N seeded random grids instead of a file");
    persistence->add_option("--seed", pers.seed, "Seed for --random");
    persistence->add_flag("--oracle", pers.oracle, "Use boundary-matrix reduction");
    persistence->add_flag("--check", pers.check, "Compare the fast path with the reduction; exit 1 on mismatch");
    persistence->add_flag("--keep-zero-pers", pers.keep_zero, "Keep zero-persistence pairs");
    persistence->add_flag("--dim0", pers.dim0, "Also report dimension-0 pairs");
    persistence->add_option("-o,--output", pers.output, "Output file (stdout if omitted)");

    LossArgs loss;
    auto* loss_cmd = app.add_subcommand("loss", "Detector loss and gradients for a map pair");
    loss_cmd->add_option("map1", loss.map1)->required()->check(CLI::ExistingFile);
    loss_cmd->add_option("map2", loss.map2)->required()->check(CLI::ExistingFile);
    loss_cmd->add_option("--homography", loss.homography, "3x3 homography file (identity correspondence if omitted)");
    loss_cmd->add_option("--alpha", loss.alpha)->check(CLI::NonNegativeNumber);
    loss_cmd->add_flag("--keep-zero-pers", loss.keep_zero);
    loss_cmd->add_flag("--symmetric", loss.symmetric, "Sum both pair orders");
    loss_cmd->add_flag("--gradients", loss.gradients, "Include dense gradient matrices");
    loss_cmd->add_option("-o,--output", loss.output);

    GradcheckArgs gc;
    auto* gradcheck = app.add_subcommand("gradcheck", "Analytic vs central finite-difference gradients");
    gradcheck->add_option("map1", gc.map1)->check(CLI::ExistingFile);
    gradcheck->add_option("map2", gc.map2)->check(CLI::ExistingFile);
    gradcheck->add_option("--random", gc.random_size, "Use a seeded random distinct-valued pair of this size");
    gradcheck->add_option("--homography", gc.homography);
    gradcheck->add_option("--alpha", gc.alphas, "One or more alpha values")->delimiter(',')->check(CLI::NonNegativeNumber);
    gradcheck->add_option("--seed", gc.seed);
    gradcheck->add_option("--step", gc.step, "Finite-difference step")->check(CLI::PositiveNumber);
    gradcheck->add_option("--samples", gc.samples, "Random probes per map");
    gradcheck->add_flag("--keep-zero-pers", gc.keep_zero);
    gradcheck->add_flag("--symmetric", gc.symmetric);
    gradcheck->add_flag("-v,--verbose", gc.verbose);

    OptimizeArgs opt;
    auto* optimize = app.add_subcommand("optimize", "Gradient descent of the loss directly on map values");
    optimize->add_option("--map1", opt.map1)->check(CLI::ExistingFile);
    optimize->add_option("--map2", opt.map2)->check(CLI::ExistingFile);
    optimize->add_option("--size", opt.size, "Side of the random initial maps")->check(CLI::Range(2, 4096));
    optimize->add_option("--seed", opt.seed);
    optimize->add_option("--alpha", opt.alpha)->check(CLI::NonNegativeNumber);
    optimize->add_option("--steps", opt.steps)->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
    optimize->add_option("--lr", opt.lr)->check(CLI::PositiveNumber);
    optimize->add_flag("--symmetric", opt.symmetric);
    optimize->add_flag("--keep-zero-pers", opt.keep_zero);
    optimize->add_flag("--unit-box", opt.unit_box, "Project values onto [0, 1] after each step");
    optimize->add_option("-o,--output-dir", opt.output_dir);

    SynthArgs syn;
    auto* synth = app.add_subcommand("synth", "Synthetic map pair related by a known warp");
    synth->add_option("--seed", syn.seed);
    synth->add_option("--size", syn.size)->check(CLI::Range(16, 8192));
    synth->add_option("--blobs", syn.blobs)->check(CLI::Range(1, 100000));
    synth->add_option("--warp", syn.warp)->check(CLI::IsMember({"none", "similarity", "homography"}));
    synth->add_option("--noise", syn.noise)->check(CLI::NonNegativeNumber);
    synth->add_option("-o,--output-dir", syn.output_dir)->required();

    DetectArgs det;
    auto* detect = app.add_subcommand("detect", "Keypoints by non-maximum suppression or persistence");
    detect->add_option("input", det.input)->required()->check(CLI::ExistingFile);
    detect->add_option("--gamma", det.gamma);
    detect->add_option("--budget", det.budget)->check(CLI::PositiveNumber);
    detect->add_option("--ranking", det.ranking)->check(CLI::IsMember({"score", "persistence"}));
    detect->add_option("--min-persistence", det.min_persistence, "Report generator peaks instead of NMS maxima")
        ->check(CLI::NonNegativeNumber);
    detect->add_flag("--keep-plateaus", det.keep_plateaus);
    detect->add_option("--overlay", det.overlay, "Write a PPM overlay of the keypoints");
    detect->add_option("-o,--output", det.output);

    RepeatabilityArgs rep;
    auto* repeat = app.add_subcommand("repeatability", "Mutual-NN and classic repeatability");
    repeat->add_option("--scene", rep.scene, "Directory with 1.txt|pgm ... and H_1_k files")->check(CLI::ExistingDirectory);
    repeat->add_option("--kp1", rep.kp1)->check(CLI::ExistingFile);
    repeat->add_option("--kp2", rep.kp2)->check(CLI::ExistingFile);
    repeat->add_option("--homography", rep.homography)->check(CLI::ExistingFile);
    repeat->add_option("--budget", rep.budgets)->delimiter(',')->check(CLI::PositiveNumber);
    repeat->add_option("--eps", rep.eps)->delimiter(',')->check(CLI::PositiveNumber);
    repeat->add_option("--detector", rep.detector)->check(CLI::IsMember({"nms", "persistence"}));
    repeat->add_option("--gamma", rep.gamma);
    repeat->add_option("--min-persistence", rep.min_persistence)->check(CLI::NonNegativeNumber);
    repeat->add_option("-o,--output", rep.output);

    ScaleArgs sc;
    auto* scale = app.add_subcommand("scale", "Repeatability across 75/50/25% pixel-area rescalings");
    scale->add_option("input", sc.input)->required()->check(CLI::ExistingFile);
    scale->add_option("--reference-side", sc.reference_side)->check(CLI::Range(16, 8192));
    scale->add_option("--budget", sc.budget)->check(CLI::PositiveNumber);
    scale->add_option("--eps", sc.eps)->delimiter(',')->check(CLI::PositiveNumber);
    scale->add_option("--detector", sc.detector)->check(CLI::IsMember({"nms", "persistence"}));
    scale->add_option("--gamma", sc.gamma);
    scale->add_option("--min-persistence", sc.min_persistence)->check(CLI::NonNegativeNumber);
    scale->add_option("-o,--output", sc.output);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const std::string command_line = join_args(argc, argv);
    try
    {
        if (*persistence)
        {
            if (pers.input.empty() && !pers.random_grids)
                throw topokey::ValueError("persistence needs an input file or --random N");
            return run_persistence(pers, command_line);
        }
        if (*loss_cmd)
            return run_loss(loss, command_line);
        if (*gradcheck)
            return run_gradcheck(gc, command_line);
        if (*optimize)
            return run_optimize(opt, command_line);
        if (*synth)
            return run_synth(syn, command_line);
        if (*detect)
            return run_detect(det, command_line);
        if (*repeat)
            return run_repeatability(rep, command_line);
        if (*scale)
            return run_scale(sc, command_line);
    }
    catch (const topokey::Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
