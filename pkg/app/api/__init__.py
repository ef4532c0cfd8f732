"""
包名称：api
功能说明：API路由端点包，包含所有HTTP接口定义
"""
