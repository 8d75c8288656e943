from typing import Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="SYZDISC_")

    LOG_LEVEL: str = Field(default="WARNING", description="Level of the stderr log sink installed by the command line")

    # default truncation override; unset fields keep the geometry's own defaults
    Q_TOTAL: Optional[int] = Field(default=None, ge=0, description="Total degree cap over the Kähler variables")
    UV_MAX: Optional[int] = Field(default=None, ge=0, description="Degree cap on the product variable uv")
    Z_WINDOW: Optional[int] = Field(default=None, ge=0, description="Displayed phase exponent window |e| <= W")
    PHASE_SLOPE: int = Field(default=1, ge=0, description="Extra phase room per unit of unused small degree")


settings = Settings()
