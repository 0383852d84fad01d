#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "catlearn/features/raster.hpp"
#include "catlearn/knowledge/types.hpp"

namespace catlearn::features {

struct Sample {
    std::vector<double> input;
    std::size_t label = 0;

    bool operator==(const Sample&) const = default;
};

struct Dataset {
    std::size_t inputs = 0;
    std::size_t classes = 0;
    std::vector<Sample> samples;

    /// Throws FeatureError on a dimension or label mismatch.
    void validate() const;
    bool operator==(const Dataset&) const = default;
};

struct RpropConfig {
    double increase = 1.2;
    double decrease = 0.5;
    double initialStep = 0.1;
    double minStep = 1e-6;
    double maxStep = 50.0;
    /// Training stops once the mean per-sample loss falls to this value.
    double targetLoss = 1e-5;

    bool operator==(const RpropConfig&) const = default;
};

/// Three-layer perceptron with logistic units on the hidden and output
/// layers. Each unit has a bias weight stored first in its row.
class Mlp {
public:
    /// Weights uniform in [-0.5, 0.5] from the seed.
    Mlp(std::size_t inputs, std::size_t hidden, std::size_t outputs, std::uint64_t seed,
        RpropConfig rprop = {});

    std::size_t inputs() const { return sizes_[0]; }
    std::size_t hidden() const { return sizes_[1]; }
    std::size_t outputs() const { return sizes_[2]; }
    const std::array<std::size_t, 3>& layerSizes() const { return sizes_; }
    std::uint64_t seed() const { return seed_; }
    const RpropConfig& rpropConfig() const { return rprop_; }

    /// All weights: hidden rows then output rows, bias first in each row.
    const std::vector<double>& weights() const { return weights_; }
    void setWeights(std::vector<double> w);
    const std::vector<double>& stepSizes() const { return steps_; }
    const std::vector<double>& previousGradient() const { return previousGradient_; }

    std::vector<double> forward(const std::vector<double>& input) const;

    /// Sum over samples and outputs of half the squared error against
    /// one-hot targets.
    double loss(const Dataset& data) const;
    /// Batch gradient of loss() with respect to weights().
    std::vector<double> gradient(const Dataset& data) const;

    /// One batch RPROP- epoch (sign-based steps, no weight backtracking).
    void rpropEpoch(const Dataset& data);

    std::size_t predict(const std::vector<double>& input) const;

    nlohmann::json checkpoint() const;
    static Mlp fromCheckpoint(const nlohmann::json& doc);

    bool operator==(const Mlp&) const = default;

private:
    void checkInput(const std::vector<double>& input) const;

    std::array<std::size_t, 3> sizes_;
    std::uint64_t seed_;
    RpropConfig rprop_;
    std::vector<double> weights_;
    std::vector<double> steps_;
    std::vector<double> previousGradient_;
};

/// Trains for up to `epochs` full-batch epochs, stopping early at the
/// target loss. Returns the loss before each epoch run followed by the final
/// loss.
std::vector<double> rpropTrain(Mlp& m, const Dataset& data, int epochs);

/// Forward pass converted to percentages.
knowledge::FeatureVector classify(const Mlp& m, const std::vector<double>& input,
                                  const std::string& featureId = {});

double accuracy(const Mlp& m, const Dataset& data);

/// Per class a: recall P(Y=a | X=a) and precision P(X=a | Y=a), where X is
/// the true label and Y the network's argmax. Undefined entries are empty.
struct ConfusionStats {
    std::vector<std::optional<double>> recall;
    std::vector<std::optional<double>> precision;
};

ConfusionStats confusionStats(const Mlp& m, const Dataset& data);

/// Rows "x0,...,x{n-1},label" after a header line.
void writeDatasetCsv(std::ostream& out, const Dataset& data);
Dataset readDatasetCsv(std::istream& in);

} // namespace catlearn::features
