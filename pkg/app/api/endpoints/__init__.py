"""
包名称：endpoints
功能说明：API端点包，包含中断概率、速率与频率复用接口
"""
