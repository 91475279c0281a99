#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace idt {

// Online protocol shared by every model: predict(x[t]) is called exactly
// once before update(d[t]) reveals the target.
class Regressor {
 public:
  virtual ~Regressor() = default;

  virtual std::string name() const = 0;
  virtual std::size_t input_dim() const = 0;
  virtual double predict(std::span<const double> x) = 0;
  virtual void update(double d) = 0;
  // Nodes evaluated during the last step (1 for single-model regressors).
  virtual std::size_t last_touched() const { return 1; }
};

}  // namespace idt
