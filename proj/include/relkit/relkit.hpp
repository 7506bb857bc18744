#pragma once

#include "relkit/cli.hpp"
#include "relkit/composer/config.hpp"
#include "relkit/composer/dataset.hpp"
#include "relkit/composer/dissociation.hpp"
#include "relkit/composer/pairs.hpp"
#include "relkit/composer/placement.hpp"
#include "relkit/composer/single_object.hpp"
#include "relkit/composer/sweep.hpp"
#include "relkit/embed/probe.hpp"
#include "relkit/embed/similarity.hpp"
#include "relkit/embedding_io.hpp"
#include "relkit/error.hpp"
#include "relkit/image.hpp"
#include "relkit/manifest_io.hpp"
#include "relkit/metrics/metrics.hpp"
#include "relkit/metrics/report.hpp"
#include "relkit/objectgen/factorized.hpp"
#include "relkit/objectgen/import.hpp"
#include "relkit/objectgen/noise.hpp"
#include "relkit/objectgen/squiggle.hpp"
#include "relkit/objectgen/transforms.hpp"
#include "relkit/parallel.hpp"
#include "relkit/png_io.hpp"
#include "relkit/prediction_io.hpp"
#include "relkit/seed_stream.hpp"
#include "relkit/types.hpp"
#include "relkit/validate/validate.hpp"
