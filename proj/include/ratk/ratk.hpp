// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#pragma once

#include "ratk/alphabet.hpp"
#include "ratk/archive.hpp"
#include "ratk/corpus.hpp"
#include "ratk/document.hpp"
#include "ratk/error.hpp"
#include "ratk/io.hpp"
#include "ratk/kernel.hpp"
#include "ratk/metrics.hpp"
#include "ratk/operations.hpp"
#include "ratk/parallel.hpp"
#include "ratk/paths.hpp"
#include "ratk/pipeline.hpp"
#include "ratk/root_scorer.hpp"
#include "ratk/semiring.hpp"
#include "ratk/stemmer.hpp"
#include "ratk/svm.hpp"
#include "ratk/text_format.hpp"
#include "ratk/utf8.hpp"
#include "ratk/wfst.hpp"
