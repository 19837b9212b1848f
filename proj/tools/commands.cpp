#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>

#include "topokey/detect.hpp"
#include "topokey/gradcheck.hpp"
#include "topokey/io.hpp"
#include "topokey/loss.hpp"
#include "topokey/optimize.hpp"
#include "topokey/persistence.hpp"
#include "topokey/repeatability.hpp"
#include "topokey/serialize.hpp"
#include "topokey/synth.hpp"

#ifndef TOPOKEY_VERSION
#define TOPOKEY_VERSION "unknown"
#endif

namespace topokey::cli
{

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string RunManifest::dump() const
{
    ordered_json doc;
    doc["tool"] = "topokey";
    doc["version"] = TOPOKEY_VERSION;
    doc["command"] = command;
    doc["inputs"] = inputs;
    doc["config"] = config;
    doc["rng"] = kRngName;
    return doc.dump(2) + "\n";
}

namespace
{

// Writes `contents` to `path` plus a sidecar manifest, or to stdout with the
// manifest on stderr.
void emit(const std::string& path, const std::string& contents, const RunManifest& manifest)
{
    if (path.empty())
    {
        std::cout << contents;
        std::cerr << "manifest: " << ordered_json::parse(manifest.dump()).dump() << "\n";
        return;
    }
    io::write_file(path, contents);
    io::write_file(path + ".manifest.json", manifest.dump());
}

ordered_json scores_json(const RepeatabilityScores& s)
{
    ordered_json per = ordered_json::object();
    double capped = 0.0;
    std::size_t n_capped = 0;
    for (std::size_t k = 0; k < s.thresholds.size(); ++k)
    {
        per[io::format_double(s.thresholds[k])] = s.scores[k];
        if (s.thresholds[k] <= 5.0)
        {
            capped += s.scores[k];
            ++n_capped;
        }
    }
    return {
        {"scores", per},
        {"mean", s.mean},
        {"mean_up_to_5px", n_capped ? capped / static_cast<double>(n_capped) : 0.0},
        {"covisible_a", s.covisible_a},
        {"covisible_b", s.covisible_b},
    };
}

std::vector<Point> to_points(const std::vector<Keypoint>& kps)
{
    std::vector<Point> pts;
    pts.reserve(kps.size());
    for (const auto& k : kps)
        pts.push_back(to_point(k.position));
    return pts;
}

std::vector<Keypoint> run_detector(const HeightMap& map, const std::string& detector, double gamma,
                                   double min_persistence)
{
    DetectConfig cfg;
    cfg.gamma = gamma;
    if (detector == "persistence")
        return persistence_keypoints(map, min_persistence, cfg);
    return nms_keypoints(map, cfg);
}

std::pair<CorrespondenceMap, CorrespondenceMap> correspondences(const HeightMap& map1, const HeightMap& map2,
                                                                const std::string& homography_path)
{
    if (homography_path.empty())
    {
        if (map1.shape() != map2.shape())
            throw ShapeError("maps differ in shape; pass --homography to relate them");
        return {CorrespondenceMap::identity(map1.shape()), CorrespondenceMap::identity(map2.shape())};
    }
    const Homography h = io::load_homography(homography_path);
    return {build_correspondence_map(map1.shape(), map2.shape(), h),
            build_correspondence_map(map2.shape(), map1.shape(), h.inverse())};
}

bool same_pairs(std::vector<PersistencePair> a, std::vector<PersistencePair> b, const CubicalGrid& grid)
{
    auto key = [&](const PersistencePair& p) { return std::make_pair(grid.id(p.birth_cell), grid.id(p.death_cell)); };
    auto by_key = [&](const PersistencePair& x, const PersistencePair& y) { return key(x) < key(y); };
    std::sort(a.begin(), a.end(), by_key);
    std::sort(b.begin(), b.end(), by_key);
    return a == b;
}

std::vector<PersistencePair> oracle_pairs(const PersistenceDiagram& d, int dim, bool keep_zero)
{
    std::vector<PersistencePair> out;
    for (const auto& p : d.pairs)
        if (p.dim == dim && (keep_zero || p.death > p.birth))
            out.push_back(p);
    return out;
}

} // namespace

int run_persistence(const PersistenceArgs& args, const std::string& command_line)
{
    RunManifest manifest{command_line, {}, {}};
    manifest.config = {{"oracle", args.oracle}, {"check", args.check}, {"keep_zero_pers", args.keep_zero},
                       {"dim0", args.dim0}};
    const auto zero = args.keep_zero ? ZeroPersistence::keep : ZeroPersistence::exclude;

    if (args.random_grids)
    {
        manifest.config["random_grids"] = *args.random_grids;
        manifest.config["seed"] = args.seed;
        Rng rng(args.seed);
        std::uniform_int_distribution<std::size_t> side(2, 12);
        std::size_t mismatches = 0;
        std::size_t generators = 0;
        for (std::size_t g = 0; g < *args.random_grids; ++g)
        {
            const std::size_t rows = side(rng);
            const std::size_t cols = side(rng);
            const HeightMap map = random_distinct_map({rows, cols}, rng);
            const auto fast = h1_generators(map, zero);
            generators += fast.size();
            if (args.check)
            {
                const auto diagram = reduce_boundary_matrix(build_filtration(map));
                if (!same_pairs(fast, oracle_pairs(diagram, 1, args.keep_zero), CubicalGrid(map.shape())))
                    ++mismatches;
            }
        }
        ordered_json summary{{"grids", *args.random_grids}, {"generators", generators}};
        if (args.check)
            summary["mismatches"] = mismatches;
        emit(args.output, summary.dump(2) + "\n", manifest);
        if (mismatches > 0)
            std::cerr << "oracle mismatch on " << mismatches << " grid(s)\n";
        return mismatches > 0 ? kCheckFailed : kOk;
    }

    manifest.inputs.push_back(args.input);
    const HeightMap map = io::load_height_map(args.input);

    std::vector<PersistencePair> pairs;
    std::vector<Cell> essential;
    std::optional<PersistenceDiagram> diagram;
    if (args.oracle || args.check)
        diagram = reduce_boundary_matrix(build_filtration(map));

    if (args.oracle)
    {
        if (args.dim0)
            pairs = oracle_pairs(*diagram, 0, args.keep_zero);
        const auto h1 = oracle_pairs(*diagram, 1, args.keep_zero);
        pairs.insert(pairs.end(), h1.begin(), h1.end());
        essential = diagram->essential;
    }
    else
    {
        const auto h0 = h0_pairs(map, zero);
        if (args.dim0)
            pairs = h0.pairs;
        const auto h1 = h1_generators(map, zero);
        pairs.insert(pairs.end(), h1.begin(), h1.end());
        essential.push_back(Cell::vertex(h0.essential));
    }

    bool ok = true;
    if (args.check)
    {
        const CubicalGrid grid(map.shape());
        ok = same_pairs(h1_generators(map, zero), oracle_pairs(*diagram, 1, args.keep_zero), grid)
             && same_pairs(h0_pairs(map, zero).pairs, oracle_pairs(*diagram, 0, args.keep_zero), grid);
        if (!ok)
            std::cerr << "fast path disagrees with boundary-matrix reduction on " << args.input << "\n";
    }

    emit(args.output, serialize::diagram_json(pairs, essential), manifest);
    return ok ? kOk : kCheckFailed;
}

int run_loss(const LossArgs& args, const std::string& command_line)
{
    RunManifest manifest{command_line, {args.map1, args.map2}, {}};
    if (!args.homography.empty())
        manifest.inputs.push_back(args.homography);
    manifest.config = {{"alpha", args.alpha}, {"keep_zero_pers", args.keep_zero}, {"symmetric", args.symmetric}};

    const HeightMap map1 = io::load_height_map(args.map1);
    const HeightMap map2 = io::load_height_map(args.map2);
    const auto [u12, u21] = correspondences(map1, map2, args.homography);
    const LossConfig cfg{args.alpha, args.keep_zero};

    const LossResult result = args.symmetric ? symmetrized_loss(map1, map2, u12, u21, cfg)
                                             : detector_loss(map1, map2, u12, cfg);
    emit(args.output, serialize::loss_json(result, args.gradients), manifest);
    return kOk;
}

int run_gradcheck(const GradcheckArgs& args, const std::string& command_line)
{
    RunManifest manifest{command_line, {}, {}};
    manifest.config = {{"alpha", args.alphas}, {"step", args.step}, {"samples", args.samples},
                       {"seed", args.seed},    {"symmetric", args.symmetric}, {"keep_zero_pers", args.keep_zero}};

    std::optional<HeightMap> map1, map2;
    if (args.random_size)
    {
        manifest.config["random_size"] = *args.random_size;
        Rng rng(args.seed);
        map1 = random_distinct_map({*args.random_size, *args.random_size}, rng);
        map2 = random_distinct_map({*args.random_size, *args.random_size}, rng);
    }
    else
    {
        if (args.map1.empty() || args.map2.empty())
            throw ValueError("gradcheck needs two maps or --random");
        manifest.inputs = {args.map1, args.map2};
        map1 = io::load_height_map(args.map1);
        map2 = io::load_height_map(args.map2);
    }
    const auto [u12, u21] = correspondences(*map1, *map2, args.homography);

    bool all_passed = true;
    for (double alpha : args.alphas)
    {
        GradcheckConfig cfg;
        cfg.loss = {alpha, args.keep_zero};
        cfg.step = args.step;
        cfg.random_samples = args.samples;
        cfg.seed = args.seed;
        cfg.symmetric = args.symmetric;
        const GradcheckReport report = gradcheck(*map1, *map2, u12, u21, cfg);
        if (!report.step_within_stratum)
        {
            std::cerr << "warning: step " << args.step << " may cross a stratum (min gap " << report.min_gap
                      << (report.has_ties ? ", map has tied values" : "") << ")\n";
        }
        if (args.verbose)
        {
            for (const auto& e : report.entries)
            {
                std::cout << "  map" << e.map << " (" << e.position.row << "," << e.position.col << ")"
                          << (e.critical ? " critical" : "") << " analytic=" << io::format_double(e.analytic)
                          << " numeric=" << io::format_double(e.numeric) << " err=" << e.error
                          << (e.ok ? "" : " FAIL") << "\n";
            }
        }
        std::cout << "alpha=" << io::format_double(alpha) << " probes=" << report.entries.size()
                  << " max_rel_err=" << report.max_relative_error
                  << " max_abs_err_at_zero=" << report.max_absolute_error_at_zero << " min_gap=" << report.min_gap
                  << " " << (report.passed ? "PASS" : "FAIL") << "\n";
        all_passed = all_passed && report.passed;
    }
    std::cerr << "manifest: " << ordered_json::parse(manifest.dump()).dump() << "\n";
    return all_passed ? kOk : kCheckFailed;
}

int run_optimize(const OptimizeArgs& args, const std::string& command_line)
{
    RunManifest manifest{command_line, {}, {}};
    manifest.config = {{"alpha", args.alpha},         {"steps", args.steps},
                       {"lr", args.lr},               {"symmetric", args.symmetric},
                       {"keep_zero_pers", args.keep_zero}, {"unit_box", args.unit_box},
                       {"seed", args.seed}};

    std::optional<HeightMap> map1, map2;
    if (!args.map1.empty() || !args.map2.empty())
    {
        if (args.map1.empty() || args.map2.empty())
            throw ValueError("pass both --map1 and --map2, or neither");
        manifest.inputs = {args.map1, args.map2};
        map1 = io::load_height_map(args.map1);
        map2 = io::load_height_map(args.map2);
    }
    else
    {
        manifest.config["size"] = args.size;
        Rng rng(args.seed);
        map1 = random_uniform_map({args.size, args.size}, rng);
        map2 = random_uniform_map({args.size, args.size}, rng);
    }
    if (map1->shape() != map2->shape())
        throw ShapeError("optimize uses identity correspondence; maps must have equal shapes");
    const auto u = CorrespondenceMap::identity(map1->shape());

    OptimizeConfig cfg;
    cfg.alpha = args.alpha;
    cfg.steps = args.steps;
    cfg.lr = args.lr;
    cfg.symmetric = args.symmetric;
    cfg.keep_zero_persistence = args.keep_zero;
    cfg.domain = args.unit_box ? ValueDomain::unit_box : ValueDomain::raw;

    std::optional<OptimizeResult> opt_result;
    try
    {
        opt_result = optimize_pair(*map1, *map2, u, u, cfg);
    }
    catch (const ValueError&)
    {
        throw;
    }
    catch (const Error& e)
    {
        std::cerr << e.what() << "\n";
        return kCheckFailed;
    }
    const OptimizeResult& result = *opt_result;

    ordered_json trajectory = ordered_json::array();
    for (const auto& s : result.trajectory)
    {
        trajectory.push_back({{"step", s.step},
                              {"loss", s.loss},
                              {"generators", s.generators},
                              {"mean_pers", s.mean_persistence},
                              {"mean_sim", s.mean_similarity}});
    }
    const auto& first = result.trajectory.front();
    const auto& last = result.trajectory.back();
    ordered_json summary{{"initial_generators", first.generators}, {"final_generators", last.generators},
                         {"initial_mean_sim", first.mean_similarity}, {"final_mean_sim", last.mean_similarity},
                         {"final_loss", last.loss}};

    if (!args.output_dir.empty())
    {
        const fs::path dir(args.output_dir);
        io::write_file(dir / "trajectory.json", trajectory.dump(2) + "\n");
        io::write_file(dir / "map1_final.txt", io::format_matrix_text(result.map1));
        io::write_file(dir / "map2_final.txt", io::format_matrix_text(result.map2));
        io::write_file(dir / "manifest.json", manifest.dump());
        std::cout << summary.dump(2) << "\n";
    }
    else
    {
        emit("", ordered_json{{"summary", summary}, {"trajectory", trajectory}}.dump(2) + "\n", manifest);
    }
    return kOk;
}

int run_synth(const SynthArgs& args, const std::string& command_line)
{
    SynthConfig cfg;
    cfg.seed = args.seed;
    cfg.size = args.size;
    cfg.n_blobs = args.blobs;
    cfg.noise = args.noise;
    if (args.warp == "none")
        cfg.warp = WarpFamily::none;
    else if (args.warp == "similarity")
        cfg.warp = WarpFamily::similarity;
    else
        cfg.warp = WarpFamily::homography;

    RunManifest manifest{command_line, {}, {}};
    manifest.config = {{"seed", args.seed}, {"size", args.size}, {"blobs", args.blobs},
                       {"warp", args.warp}, {"noise", args.noise}, {"interpolation", "bilinear"}};

    const SynthPair pair = synth_pair(cfg);
    const fs::path dir(args.output_dir);
    io::write_file(dir / "1.txt", io::format_matrix_text(pair.first));
    io::write_file(dir / "2.txt", io::format_matrix_text(pair.second));
    io::write_file(dir / "1.pgm", io::format_pgm(pair.first));
    io::write_file(dir / "2.pgm", io::format_pgm(pair.second));
    io::write_file(dir / "H_1_2", io::format_homography(pair.warp));
    io::write_file(dir / "manifest.json", manifest.dump());
    return kOk;
}

int run_detect(const DetectArgs& args, const std::string& command_line)
{
    RunManifest manifest{command_line, {args.input}, {}};
    manifest.config = {{"gamma", args.gamma}, {"ranking", args.ranking}, {"keep_plateaus", args.keep_plateaus}};
    if (args.budget)
        manifest.config["budget"] = *args.budget;
    if (args.min_persistence)
        manifest.config["min_persistence"] = *args.min_persistence;

    const HeightMap map = io::load_height_map(args.input);
    DetectConfig cfg;
    cfg.gamma = args.gamma;
    cfg.max_keypoints = args.budget;
    cfg.ranking = args.ranking == "persistence" ? Ranking::by_persistence : Ranking::by_score;
    cfg.reject_plateaus = !args.keep_plateaus;

    const auto keypoints = args.min_persistence ? persistence_keypoints(map, *args.min_persistence, cfg)
                                                : nms_keypoints(map, cfg);
    if (!args.overlay.empty())
        io::write_file(args.overlay, io::format_overlay_ppm(map, keypoints));
    emit(args.output, serialize::keypoints_json({map.shape(), keypoints}), manifest);
    return kOk;
}

namespace
{

ordered_json evaluate_pair(const serialize::KeypointFile& a, const serialize::KeypointFile& b, const Homography& h,
                           const std::vector<std::size_t>& budgets, const EvalConfig& eval)
{
    ordered_json out = ordered_json::array();
    for (std::size_t budget : budgets)
    {
        if (budget > a.keypoints.size() || budget > b.keypoints.size())
        {
            std::cerr << "warning: budget " << budget << " exceeds available keypoints (" << a.keypoints.size()
                      << ", " << b.keypoints.size() << "); using all\n";
        }
        auto ka = a.keypoints;
        auto kb = b.keypoints;
        truncate_keypoints(ka, budget);
        truncate_keypoints(kb, budget);
        const auto pa = to_points(ka);
        const auto pb = to_points(kb);
        out.push_back({
            {"budget", budget},
            {"n1", pa.size()},
            {"n2", pb.size()},
            {"mutual_nn", scores_json(mutual_nn_repeatability(pa, pb, h, a.shape, b.shape, eval))},
            {"classic", scores_json(classic_repeatability(pa, pb, h, a.shape, b.shape, eval))},
        });
    }
    return out;
}

std::optional<fs::path> find_image(const fs::path& dir, int index)
{
    for (const char* ext : {".txt", ".pgm"})
    {
        const fs::path p = dir / (std::to_string(index) + ext);
        if (fs::exists(p))
            return p;
    }
    return std::nullopt;
}

} // namespace

int run_repeatability(const RepeatabilityArgs& args, const std::string& command_line)
{
    EvalConfig eval;
    eval.thresholds = args.eps;
    validate(eval);

    RunManifest manifest{command_line, {}, {}};
    manifest.config = {{"budgets", args.budgets}, {"eps", args.eps}, {"detector", args.detector},
                       {"gamma", args.gamma},     {"min_persistence", args.min_persistence}};

    ordered_json report;
    ordered_json pairs = ordered_json::array();

    if (!args.scene.empty())
    {
        const fs::path dir(args.scene);
        manifest.inputs.push_back(args.scene);
        const auto first = find_image(dir, 1);
        if (!first)
            throw Error("scene " + args.scene + " has no image 1 (.txt or .pgm)");

        auto detect = [&](const fs::path& p) {
            const HeightMap map = io::load_height_map(p);
            return serialize::KeypointFile{map.shape(), run_detector(map, args.detector, args.gamma, args.min_persistence)};
        };
        const auto ref = detect(*first);
        for (int k = 2;; ++k)
        {
            const auto image = find_image(dir, k);
            if (!image)
                break;
            const fs::path hpath = dir / ("H_1_" + std::to_string(k));
            if (!fs::exists(hpath))
                throw Error("missing homography file " + hpath.string());
            const Homography h = io::load_homography(hpath);
            pairs.push_back({{"pair", "1-" + std::to_string(k)},
                             {"budgets", evaluate_pair(ref, detect(*image), h, args.budgets, eval)}});
        }
        report["scene"] = args.scene;
    }
    else
    {
        if (args.kp1.empty() || args.kp2.empty() || args.homography.empty())
            throw ValueError("pass --scene DIR, or --kp1, --kp2 and --homography");
        manifest.inputs = {args.kp1, args.kp2, args.homography};
        const auto a = serialize::parse_keypoints_json(io::read_file(args.kp1), args.kp1);
        const auto b = serialize::parse_keypoints_json(io::read_file(args.kp2), args.kp2);
        const Homography h = io::load_homography(args.homography);
        pairs.push_back({{"pair", "1-2"}, {"budgets", evaluate_pair(a, b, h, args.budgets, eval)}});
    }

    // Aggregate: mean over pairs of the 5px-capped averages, per budget.
    ordered_json aggregate = ordered_json::array();
    for (std::size_t bi = 0; bi < args.budgets.size(); ++bi)
    {
        double mutual = 0.0, classic = 0.0;
        for (const auto& p : pairs)
        {
            mutual += p["budgets"][bi]["mutual_nn"]["mean_up_to_5px"].get<double>();
            classic += p["budgets"][bi]["classic"]["mean_up_to_5px"].get<double>();
        }
        const double n = pairs.empty() ? 1.0 : static_cast<double>(pairs.size());
        aggregate.push_back({{"budget", args.budgets[bi]}, {"mutual_nn", mutual / n}, {"classic", classic / n}});
    }
    report["pairs"] = pairs;
    report["aggregate"] = aggregate;
    emit(args.output, report.dump(2) + "\n", manifest);
    return kOk;
}

int run_scale(const ScaleArgs& args, const std::string& command_line)
{
    ScaleProtocol protocol;
    protocol.reference_side = args.reference_side;
    protocol.budget = args.budget;
    protocol.eval.thresholds = args.eps;

    RunManifest manifest{command_line, {args.input}, {}};
    manifest.config = {{"reference_side", args.reference_side}, {"budget", args.budget},
                       {"eps", args.eps},                       {"detector", args.detector},
                       {"gamma", args.gamma},                   {"min_persistence", args.min_persistence},
                       {"area_fractions", protocol.area_fractions}, {"interpolation", "bilinear"}};

    const HeightMap source = io::load_height_map(args.input);
    const std::size_t ref_side = args.reference_side;
    const HeightMap reference = io::resize_bilinear(source, {ref_side, ref_side});

    auto detect = [&](const HeightMap& map) {
        return to_points(run_detector(map, args.detector, args.gamma, args.min_persistence));
    };

    const ScaleEntry ref_entry{detect(reference), reference.shape(), Homography::identity()};
    std::map<double, ScaleEntry> scaled;
    for (double fraction : protocol.area_fractions)
    {
        const std::size_t side = scaled_side(ref_side, fraction);
        const HeightMap small = io::resize_bilinear(reference, {side, side});
        scaled.emplace(fraction, ScaleEntry{detect(small), small.shape(), scale_homography(ref_side, side)});
    }

    ordered_json out = ordered_json::array();
    for (const auto& s : scale_experiment(ref_entry, scaled, protocol))
    {
        out.push_back({{"area_fraction", s.area_fraction},
                       {"side", scaled_side(ref_side, s.area_fraction)},
                       {"mutual_nn", scores_json(s.scores)}});
    }
    emit(args.output, ordered_json{{"reference_keypoints", ref_entry.points.size()}, {"scales", out}}.dump(2) + "\n",
         manifest);
    return kOk;
}

} // namespace topokey::cli
