#pragma once

#include "facecue/augmentation.hpp"
#include "facecue/csv.hpp"
#include "facecue/error.hpp"
#include "facecue/features.hpp"
#include "facecue/forest.hpp"
#include "facecue/landmarks.hpp"
#include "facecue/matrix.hpp"
#include "facecue/metrics.hpp"
#include "facecue/model_io.hpp"
#include "facecue/pca.hpp"
#include "facecue/pipeline.hpp"
#include "facecue/rng.hpp"
#include "facecue/symmetric_eigen.hpp"
#include "facecue/synthetic.hpp"
