#pragma once

#include "relseq/baseline.hpp"
#include "relseq/corpus.hpp"
#include "relseq/cross_validation.hpp"
#include "relseq/decoder.hpp"
#include "relseq/feature_index.hpp"
#include "relseq/features.hpp"
#include "relseq/lexicons.hpp"
#include "relseq/metrics.hpp"
#include "relseq/model_io.hpp"
#include "relseq/perceptron.hpp"
#include "relseq/semisupervised.hpp"
#include "relseq/synthetic.hpp"
