/*
 * Copyright 2026 The percept-xai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// ONNX-format encoders executed through OpenCV's DNN module.

#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>

#include "percept/encoder.hpp"
#include "percept/error.hpp"

namespace percept {
namespace {

class OnnxEncoder final : public Encoder {
 public:
  OnnxEncoder(EncoderSpec spec, int max_concurrency)
      : Encoder(std::move(spec)), max_nets_(std::max(1, max_concurrency)) {
    if (max_nets_ > 1) {
      // Parallelism comes from independent network instances.
      cv::setNumThreads(1);
    }
    idle_.push_back(LoadNet());
    created_ = 1;
    const Size size = spec_.input_size;
    std::vector<float> probe(3 * size.area(), 0.0f);
    const auto out = Run(probe, 1);
    if (spec_.embedding_dim == 0) {
      spec_.embedding_dim = static_cast<int>(out.front().size());
    } else if (out.front().size() !=
               static_cast<std::size_t>(spec_.embedding_dim)) {
      throw Error(ErrorKind::kShapeMismatch,
                  "model output dim " + std::to_string(out.front().size()) +
                      " differs from metadata embedding_dim " +
                      std::to_string(spec_.embedding_dim));
    }
  }

 protected:
  std::vector<Embedding> Run(std::span<const float> planar,
                             std::size_t count) const override {
    const Size size = spec_.input_size;
    const int dims[] = {static_cast<int>(count), 3, size.height, size.width};
    cv::Mat blob(4, dims, CV_32F);
    std::copy(planar.begin(), planar.end(), blob.ptr<float>());

    auto lease = Acquire();
    cv::Mat output;
    try {
      lease.net->setInput(blob);
      output = lease.net->forward();
    } catch (const cv::Exception& e) {
      Release(std::move(lease.net));
      throw Error(ErrorKind::kShapeMismatch,
                  "inference failed for '" + spec_.name + "': " + e.what());
    }
    Release(std::move(lease.net));

    if (output.empty() || output.size[0] != static_cast<int>(count)) {
      throw Error(ErrorKind::kShapeMismatch,
                  "model output batch dim does not match input batch");
    }
    const std::size_t dim = output.total() / count;
    cv::Mat flat = output.reshape(1, static_cast<int>(count));
    if (!flat.isContinuous()) flat = flat.clone();
    std::vector<Embedding> out(count);
    for (std::size_t n = 0; n < count; ++n) {
      const float* row = flat.ptr<float>(static_cast<int>(n));
      out[n].assign(row, row + dim);
    }
    return out;
  }

 private:
  struct Lease {
    std::unique_ptr<cv::dnn::Net> net;
  };

  std::unique_ptr<cv::dnn::Net> LoadNet() const {
    try {
      auto net =
          std::make_unique<cv::dnn::Net>(cv::dnn::readNetFromONNX(spec_.source));
      if (net->empty()) throw Error(ErrorKind::kModelLoad, "empty network");
      net->setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
      net->setPreferableTarget(cv::dnn::DNN_TARGET_CPU);
      return net;
    } catch (const cv::Exception& e) {
      throw Error(ErrorKind::kModelLoad,
                  "cannot load ONNX model " + spec_.source + ": " + e.what());
    }
  }

  Lease Acquire() const {
    std::unique_lock lock(mu_);
    for (;;) {
      if (!idle_.empty()) {
        Lease lease{std::move(idle_.back())};
        idle_.pop_back();
        return lease;
      }
      if (created_ < max_nets_) {
        ++created_;
        lock.unlock();
        try {
          return Lease{LoadNet()};
        } catch (...) {
          std::lock_guard relock(mu_);
          --created_;
          throw;
        }
      }
      available_.wait(lock);
    }
  }

  void Release(std::unique_ptr<cv::dnn::Net> net) const {
    {
      std::lock_guard lock(mu_);
      idle_.push_back(std::move(net));
    }
    available_.notify_one();
  }

  const int max_nets_;
  mutable std::mutex mu_;
  mutable std::condition_variable available_;
  mutable std::vector<std::unique_ptr<cv::dnn::Net>> idle_;
  mutable int created_ = 0;
};

}  // namespace

std::unique_ptr<Encoder> LoadOnnxEncoder(EncoderSpec spec,
                                         int max_concurrency) {
  if (spec.source.empty()) {
    throw Error(ErrorKind::kModelLoad, "no model file given");
  }
  return std::make_unique<OnnxEncoder>(std::move(spec), max_concurrency);
}

}  // namespace percept
