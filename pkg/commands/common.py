import json
import logging
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from models.data_models import CommandResponse, DefiningData
from utils.errors import ParseError

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def load_defining_data(path: Optional[Path]) -> DefiningData:
    """Read DefiningData JSON, turning every read or schema failure into ParseError"""
    if path is None:
        raise ParseError("an input file is required")
    try:
        return DefiningData.model_validate(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise ParseError(f"Cannot parse {path}: {e}")


def emit(response: CommandResponse, output: Optional[Path] = None) -> str:
    text = json.dumps(response.model_dump(mode="json"), indent=2, ensure_ascii=False)
    if output is not None:
        Path(output).write_text(text)
        logger.info(f"Response written to {output}")
    return text


def failure(action: str, e: Exception) -> CommandResponse:
    logger.error(f"Error {action}: {e}")
    return CommandResponse(
        success=False,
        data={"error": type(e).__name__},
        message=f"Error {action}: {str(e)}"
    )
